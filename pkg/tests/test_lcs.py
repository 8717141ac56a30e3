"""Exact, greedy, and partitioned common-subsequence alignment."""

import numpy as np
import pytest

from conftest import DNA, dna_pair
from relfm.fm import FMIndex
from relfm.lcs import (
    Alignment,
    PartitionSpec,
    bw_distance,
    common_run,
    exact_lcs,
    greedy_lcs,
    partitioned_bwt_lcs,
)
from relfm.text import Alphabet, Text, bwt_from_sa, suffix_array
from relfm.verify import check_alignment, lcs_length_memo, random_dna


def codes(raw):
    """Treat ASCII bytes directly as symbol codes ('$' sorts before letters)."""
    return np.frombuffer(raw, dtype=np.uint8)


def test_exact_lcs_bwt_pair():
    al = exact_lcs(codes(b"BB$AA"), codes(b"B$BBA"))
    assert len(al) == 3
    assert al.x_pos.tolist() == [1, 2, 4]
    assert al.y_pos.tolist() == [1, 3, 5]
    assert al.validate(codes(b"BB$AA"), codes(b"B$BBA"))


def test_exact_lcs_identity_and_disjoint():
    x = codes(b"BANANA")
    al = exact_lcs(x, x)
    assert len(al) == 6
    assert al.x_pos.tolist() == list(range(1, 7))
    assert len(exact_lcs(codes(b"AAA"), codes(b"BBB"))) == 0


def test_exact_lcs_matches_memo_oracle():
    rng = np.random.default_rng(14)
    for _ in range(25):
        x = random_dna(rng, int(rng.integers(1, 60)), alphabet=b"ACG")
        y = random_dna(rng, int(rng.integers(1, 60)), alphabet=b"ACG")
        al = exact_lcs(codes(x), codes(y))
        assert len(al) == lcs_length_memo(x, y)
        assert al.validate(codes(x), codes(y))


def test_exact_lcs_size_guard():
    big = np.zeros(20001, np.uint8) + 65
    with pytest.raises(ValueError, match="too large"):
        exact_lcs(big, big[:6000])


def test_alignment_validate_rejects_bad_pairs():
    x, y = codes(b"ABC"), codes(b"ACB")
    good = Alignment(np.array([1, 2]), np.array([1, 3]))
    assert good.validate(x, y)
    mismatched = Alignment(np.array([1, 2]), np.array([1, 2]))
    assert not mismatched.validate(x, y)
    nonmonotone = Alignment(np.array([2, 1]), np.array([3, 1]))
    assert not nonmonotone.validate(x, y)
    out_of_range = Alignment(np.array([4]), np.array([1]))
    assert not out_of_range.validate(x, y)


def test_greedy_lcs_classic_diff_example():
    x, y = codes(b"ABCABBA"), codes(b"CBABAC")
    al = greedy_lcs(x, y, max_diag=1000)
    assert len(al) == 4
    assert len(al) == lcs_length_memo(b"ABCABBA", b"CBABAC")
    assert al.validate(x, y)


def test_greedy_lcs_identical_inputs():
    x = codes(b"ACGTACGT")
    al = greedy_lcs(x, x, max_diag=0)  # zero edits needed, trim handles it all
    assert len(al) == 8


def test_greedy_lcs_fallback_to_common_run():
    x = codes(b"A" * 100)
    y = codes(b"B" * 100)
    al = greedy_lcs(x, y, max_diag=10)
    assert len(al) == 0


def test_greedy_equals_exact_on_random_pairs():
    rng = np.random.default_rng(15)
    for n in (10, 100, 500, 2000):
        x = random_dna(rng, n)
        y = random_dna(rng, max(1, n - 7))
        al = greedy_lcs(codes(x), codes(y), max_diag=10**6)
        want = exact_lcs(codes(x), codes(y))
        assert len(al) == len(want)
        assert al.validate(codes(x), codes(y))


def test_common_run_examples():
    al = common_run(codes(b"AABA"), codes(b"BAAA"))
    assert len(al) == 3
    assert al.validate(codes(b"AABA"), codes(b"BAAA"))
    assert len(common_run(codes(b"AAA"), codes(b"BBB"))) == 0
    al = common_run(codes(b"AB"), codes(b"AB"))
    assert len(al) == 1 and al.x_pos.tolist() == [1]  # tie broken to symbol A


def bwt_of(text):
    return bwt_from_sa(text.codes, suffix_array(text.codes))


def test_partitioned_identical_indexes():
    t = Text.from_bytes(b"AAGTTGAGAGTGAGT", alphabet=DNA)
    ix = FMIndex.build(t, rate=4)
    al = partitioned_bwt_lcs(ix, ix)
    assert len(al) == t.n + 1
    assert al.validate(bwt_of(t), bwt_of(t))


def test_partitioned_below_exact_and_valid():
    part = PartitionSpec(max_block=64, max_depth=16)
    for seed in (0, 1):
        t1, t2 = dna_pair(seed, 10_000, rate=0.01)
        ix1 = FMIndex.build(t1, rate=8)
        ix2 = FMIndex.build(t2, rate=8)
        al = partitioned_bwt_lcs(ix1, ix2, part)
        b1, b2 = bwt_of(t1), bwt_of(t2)
        assert al.validate(b1, b2)
        assert check_alignment(
            b1, b2, [(int(i) - 1, int(j) - 1) for i, j in zip(al.x_pos, al.y_pos)]
        )
        exact = exact_lcs(b1, b2)
        assert len(al) <= len(exact)
        assert len(al) >= 0.9 * len(exact)


def test_partitioned_leaf_order_concatenates_increasing():
    t1, t2 = dna_pair(2, 3000, rate=0.02)
    al = partitioned_bwt_lcs(
        FMIndex.build(t1, rate=8), FMIndex.build(t2, rate=8), PartitionSpec(32, 24)
    )
    assert np.all(np.diff(al.x_pos) > 0)
    assert np.all(np.diff(al.y_pos) > 0)


def test_partitioned_hard_gap_uses_common_run():
    """Two-letter pair engineered so one partition has a huge length gap."""
    ab = Alphabet(b"AB")
    raw1 = b"A" * 3000 + b"B" * 10
    raw2 = b"A" * 10 + b"B" * 3000
    ix1 = FMIndex.build(Text.from_bytes(raw1, alphabet=ab), rate=8)
    ix2 = FMIndex.build(Text.from_bytes(raw2, alphabet=ab), rate=8)
    al = partitioned_bwt_lcs(ix1, ix2, PartitionSpec(64, 8, 200, hard_gap=100))
    assert al.validate(bwt_of(ix1_text(ix1)), bwt_of(ix1_text(ix2)))
    assert len(al) > 0


def ix1_text(ix):
    return Text.from_bytes(ix.extract(1, ix.n), alphabet=ix.alphabet)


def test_bw_distance():
    assert bw_distance(4, 4, exact_lcs(codes(b"BB$AA"), codes(b"B$BBA"))) == 4
    ident = exact_lcs(codes(b"XYZ"), codes(b"XYZ"))
    padded = Alignment(
        np.append(ident.x_pos, 4), np.append(ident.y_pos, 4)
    )  # matched sentinel rows
    assert bw_distance(3, 3, padded) == 0
    with pytest.raises(ValueError, match="invalid alignment"):
        bw_distance(2, 2, padded)


def test_bw_distance_lower_bound():
    rng = np.random.default_rng(16)
    for _ in range(20):
        x = random_dna(rng, int(rng.integers(1, 80)))
        y = random_dna(rng, int(rng.integers(1, 80)))
        al = exact_lcs(codes(x), codes(y))
        assert bw_distance(len(x), len(y), al) >= abs(len(x) - len(y))
