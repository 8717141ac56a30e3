"""Tests for the self-check suite behind `rfmx verify`."""

import numpy as np

from conftest import dna_pair
from relfm.relative import RelativeIndex
from relfm.verify import run_suite

EXPECTED_CHECKS = {
    "suffix_array",
    "bwt_roundtrip",
    "exact_lcs",
    "rel_rank",
    "rel_locate",
    "invariance",
    "two_choice_lis",
    "reduction",
}


def test_run_suite_passes_on_generated_corpus():
    ok, lines = run_suite(n=400, seeds=2)
    assert ok is True
    assert lines
    assert all(line.endswith("status=ok") for line in lines)
    names = {line.split()[0].split("=")[1] for line in lines}
    assert names == EXPECTED_CHECKS


def test_run_suite_is_reproducible():
    first = run_suite(n=400, seeds=1)
    second = run_suite(n=400, seeds=1)
    assert first == second


def test_run_suite_accepts_external_corpus():
    t1, t2 = dna_pair(8, 600, rate=0.01)
    ref = t1.alphabet.decode(t1.codes[:-1])
    tgt = t2.alphabet.decode(t2.codes[:-1])
    ok, lines = run_suite(n=600, seeds=1, ref_bytes=ref, target_bytes=tgt)
    assert ok is True
    assert any("rel_rank" in line for line in lines)


def test_run_suite_flags_injected_fault(monkeypatch):
    original = RelativeIndex.rel_rank

    def off_by_one(self, a, i):
        value = original(self, a, i)
        return value + 1 if i >= 250 else value

    monkeypatch.setattr(RelativeIndex, "rel_rank", off_by_one)
    ok, lines = run_suite(n=400, seeds=1)
    assert ok is False
    failures = [line for line in lines if "status=FAIL" in line]
    assert failures
    assert any("check=rel_rank" in line for line in failures)
    # the failing line names a counterexample
    assert any("symbol=" in line and "prefix=" in line for line in failures)
