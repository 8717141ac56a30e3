"""Timing harness comparing the kernel backends on one synthetic corpus.

Structures capture their kernel views at construction time, so each
backend is measured by rebinding ``core.kernel`` and rebuilding from the
same inputs.  Results are key=value lines, sizes as percentages of the
plain 8-bit text.
"""

import time

import numpy as np

from relfm import core
from relfm.fm import FMIndex
from relfm.invariant import build_relative_sample
from relfm.text import Alphabet, Text
from relfm.verify import mutate, random_dna


def _time(fn, repeat=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _run_backend(module, text1, text2, patterns, rate):
    name = module.BACKEND
    saved = core.kernel
    core.kernel = module
    try:
        lines = []
        t0 = time.perf_counter()
        ix1 = FMIndex.build(text1, rate=rate)
        lines.append((f"{name}_build_s", time.perf_counter() - t0))

        t0 = time.perf_counter()
        sample = build_relative_sample(ix1, text2, source_text=text1)
        lines.append((f"{name}_rel_build_s", time.perf_counter() - t0))
        rel = sample.rel

        ix2 = FMIndex.build(text2, rate=rate)
        lines.append(
            (f"{name}_count_s", _time(lambda: [ix2.count(p) for p in patterns], 3))
        )
        lines.append(
            (
                f"{name}_locate_s",
                _time(lambda: [ix2.locate(ix2.range_of(p)) for p in patterns], 3),
            )
        )
        lines.append(
            (f"{name}_rel_count_s", _time(lambda: [rel.count(p) for p in patterns], 3))
        )
        lines.append(
            (
                f"{name}_rel_locate_s",
                _time(lambda: [sample.locate_pattern(p) for p in patterns], 3),
            )
        )
        sizes = (ix2.size_bytes(), rel.size_bytes(), sample.size_bytes())
        return lines, sizes
    finally:
        core.kernel = saved


def run(n=20000, rate=32, mutation=0.01, patterns=200, seed=0):
    """Benchmark every available backend; returns report lines."""
    rng = np.random.default_rng(seed)
    raw1 = random_dna(rng, n)
    raw2 = mutate(rng, raw1, mutation)
    alphabet = Alphabet(b"ACGNT", catchall=b"N")
    text1 = Text.from_bytes(raw1, alphabet=alphabet)
    text2 = Text.from_bytes(raw2, alphabet=alphabet)
    pats = []
    for _ in range(patterns):
        start = int(rng.integers(0, max(1, len(raw2) - 16)))
        pats.append(raw2[start : start + int(rng.integers(4, 17))])

    out = [
        f"n={n}",
        f"rate={rate}",
        f"mutation={mutation}",
        f"patterns={len(pats)}",
        f"backends={','.join(m.BACKEND for m in core.backends())}",
    ]
    sizes = None
    for module in core.backends():
        lines, sizes = _run_backend(module, text1, text2, pats, rate)
        out += [f"{key}={value:.6f}" for key, value in lines]
    if sizes is not None:
        standalone, rel_only, rel_full = sizes
        out += [
            f"standalone_bytes={standalone}",
            f"rel_bytes={rel_only}",
            f"rel_sample_bytes={rel_full}",
            f"standalone_pct={100.0 * standalone / n:.2f}",
            f"rel_pct={100.0 * rel_only / n:.2f}",
            f"rel_sample_pct={100.0 * rel_full / n:.2f}",
        ]
    return out
