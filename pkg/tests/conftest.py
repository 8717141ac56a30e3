"""Shared helpers: deterministic DNA corpora and mutated pairs."""

import numpy as np

from relfm.text import Alphabet, Text
from relfm.verify import mutate, random_dna

DNA = Alphabet(b"ACGNT", catchall=b"N")


def dna_text(rng, n):
    return Text.from_bytes(random_dna(rng, n), alphabet=DNA)


def dna_pair(seed, n, rate=0.01, indel_fraction=0.1):
    """Reference/target Text pair: random DNA plus point mutations."""
    rng = np.random.default_rng(seed)
    raw1 = random_dna(rng, n)
    raw2 = mutate(rng, raw1, rate, indel_fraction=indel_fraction)
    return Text.from_bytes(raw1, alphabet=DNA), Text.from_bytes(raw2, alphabet=DNA)


def pattern_set(rng, raw, count, max_len, min_len=1):
    """Patterns sliced from `raw` (guaranteed hits mixed with random tails)."""
    pats = []
    for _ in range(count):
        length = int(rng.integers(min_len, max_len + 1))
        start = int(rng.integers(0, max(1, len(raw) - length + 1)))
        pats.append(raw[start : start + length])
    return pats
