"""Relative index: difference structures, three-term rank, relative counting."""

import math

import numpy as np
import pytest

from conftest import DNA, dna_pair, pattern_set
from relfm.fm import FMIndex
from relfm.lcs import Alignment, exact_lcs
from relfm.relative import CountDelta, RelativeIndex, build_relative
from relfm.text import Text, bwt_from_sa, char_counts, suffix_array
from relfm.verify import naive_occurrences, naive_rank

PAIR_BWT1 = b"BB$AA"  # ABAB
PAIR_BWT2 = b"B$BBA"  # ABBB


def bwt_of(text):
    return bwt_from_sa(text.codes, suffix_array(text.codes))


def worked_pair(rate=2):
    t1 = Text.from_bytes(b"ABAB")
    t2 = Text.from_bytes(b"ABBB", alphabet=t1.alphabet)
    ix1 = FMIndex.build(t1, rate=rate)
    align = Alignment(np.array([1, 2, 4]), np.array([1, 3, 5]))  # B, B, A
    rel = RelativeIndex.build(ix1, bwt_of(t2), align)
    return ix1, rel, t2


def test_build_relative_worked_structures():
    ix1, rel, t2 = worked_pair()
    assert rel.b1.tobits().tolist() == [0, 0, 1, 0, 1]
    assert rel.b2.tobits().tolist() == [0, 1, 0, 1, 0]
    assert rel.d1.decode(0, 2).tolist() == [0, 1]  # "$A"
    assert rel.d2.decode(0, 2).tolist() == [0, 2]  # "$B"
    assert rel.n2 == 4


def test_build_relative_identity():
    t = Text.from_bytes(b"ABAB")
    ix = FMIndex.build(t, rate=2)
    rows = ix.rows
    ident = Alignment(np.arange(1, rows + 1), np.arange(1, rows + 1))
    rel = RelativeIndex.build(ix, bwt_of(t), ident)
    assert rel.b1.ones == 0 and rel.b2.ones == 0
    assert len(rel.d1) == 0 and len(rel.d2) == 0
    assert rel.delta.symbols == []
    for a in range(ix.alphabet.sigma):
        assert rel.rel_cumulative(a) == ix.counts[a]


def test_build_relative_rejects_bad_alignment():
    t1 = Text.from_bytes(b"ABAB")
    t2 = Text.from_bytes(b"ABBB", alphabet=t1.alphabet)
    ix1 = FMIndex.build(t1, rate=2)
    bad = Alignment(np.array([1, 2, 3]), np.array([1, 3, 5]))  # row 3 is $ vs B
    with pytest.raises(ValueError, match="not a common subsequence"):
        RelativeIndex.build(ix1, bwt_of(t2), bad)


def test_common_rows_read_equal_through_both_sides():
    t1, t2 = dna_pair(22, 1500, rate=0.01)
    ix1 = FMIndex.build(t1, rate=8)
    b1, b2 = bwt_of(t1), bwt_of(t2)
    align = exact_lcs(b1, b2)
    rel = RelativeIndex.build(ix1, b2, align)
    mask1 = rel.b1.tobits() == 0
    mask2 = rel.b2.tobits() == 0
    assert np.array_equal(b1[mask1], b2[mask2])
    assert rel.b1.zeros == rel.b2.zeros == len(align)
    assert len(rel.d1) == rel.b1.ones and len(rel.d2) == rel.b2.ones


def test_rel_rank_worked_example():
    _, rel, t2 = worked_pair()
    b_code = t2.alphabet.encode(b"B")[0]
    assert rel.rel_rank(b_code, 4) == 3
    for a in range(t2.alphabet.sigma):
        assert rel.rel_rank(a, 0) == 0
    bwt2 = bwt_of(t2)
    for a in range(t2.alphabet.sigma):
        for i in range(len(bwt2) + 1):
            assert rel.rel_rank(a, i) == naive_rank(bwt2, a, i)


def test_rel_rank_bounds():
    _, rel, _ = worked_pair()
    with pytest.raises(ValueError):
        rel.rel_rank(1, 6)
    with pytest.raises(ValueError):
        rel.rel_rank(1, -1)
    with pytest.raises(ValueError):
        rel.rel_rank(9, 1)


def test_rel_rank_random_pairs_match_materialized_bwt():
    for seed in (0, 1, 2):
        t1, t2 = dna_pair(seed, 4000, rate=0.01)
        ix1 = FMIndex.build(t1, rate=16)
        bwt2 = bwt_of(t2)
        rel = RelativeIndex.build(ix1, bwt2, exact_lcs(bwt_of(t1), bwt2))
        rng = np.random.default_rng(seed)
        for a in range(DNA.sigma):
            for i in rng.integers(0, len(bwt2) + 1, size=120):
                assert rel.rel_rank(a, int(i)) == naive_rank(bwt2, a, int(i))


def test_rel_cumulative():
    ix1, rel, t2 = worked_pair()
    b_code = t2.alphabet.encode(b"B")[0]
    assert rel.rel_cumulative(b_code) == 2
    assert ix1.counts[b_code] == 3
    assert rel.rel_cumulative(0) == 0
    want = char_counts(bwt_of(t2), t2.alphabet.sigma)
    for a in range(t2.alphabet.sigma):
        assert rel.rel_cumulative(a) == want[a]


def test_count_delta_construction_and_payload():
    c1 = np.array([0, 1, 3, 5])  # ABAB$
    c2 = np.array([0, 1, 2, 5])  # ABBB$
    delta = CountDelta.from_counts(c1, c2, sigma=3)
    assert delta.symbols == [2]
    assert delta.s2_before == [2]
    again, off = CountDelta.from_payload(delta.payload(), 0)
    assert off == len(delta.payload())
    assert again.symbols == delta.symbols and again.s2_before == delta.s2_before
    with pytest.raises(ValueError, match="mismatched delta lengths"):
        CountDelta([1, 2], [3])


def test_rel_count_worked_example():
    _, rel, _ = worked_pair()
    assert rel.count(b"BB") == 2
    assert rel.count(b"AB") == 1
    assert rel.count(b"B") == 3
    assert rel.count(b"ABBBB") == 0  # longer than the target
    assert rel.count(b"Z") == 0


def test_rel_count_matches_standalone_and_naive():
    t1, t2 = dna_pair(23, 5000, rate=0.005)
    ix1 = FMIndex.build(t1, rate=16)
    ix2 = FMIndex.build(t2, rate=16)
    bwt2 = bwt_of(t2)
    rel = RelativeIndex.build(ix1, bwt2, exact_lcs(bwt_of(t1), bwt2))
    rng = np.random.default_rng(23)
    raw2 = t2.raw()
    for p in pattern_set(rng, raw2, 120, 40):
        want = len(naive_occurrences(t2.codes[:-1], DNA.encode(p)))
        assert rel.count(p) == want
        assert ix2.count(p) == want


def test_build_relative_alias():
    t1 = Text.from_bytes(b"ABAB")
    t2 = Text.from_bytes(b"ABBB", alphabet=t1.alphabet)
    ix1 = FMIndex.build(t1, rate=2)
    align = Alignment(np.array([1, 2, 4]), np.array([1, 3, 5]))
    rel = build_relative(ix1, bwt_of(t2), align)
    assert rel.count(b"BB") == 2


def test_payload_roundtrip_and_reference_binding():
    t1, t2 = dna_pair(24, 1200, rate=0.01)
    ix1 = FMIndex.build(t1, rate=8)
    bwt2 = bwt_of(t2)
    rel = RelativeIndex.build(ix1, bwt2, exact_lcs(bwt_of(t1), bwt2))
    again = RelativeIndex.from_payload(rel.payload(), ix1)
    rng = np.random.default_rng(24)
    for p in pattern_set(rng, t2.raw(), 30, 20):
        assert again.count(p) == rel.count(p)
    other = FMIndex.build(Text.from_bytes(t2.raw(), alphabet=DNA), rate=8)
    with pytest.raises(ValueError, match="reference mismatch"):
        RelativeIndex.from_payload(rel.payload(), other)


def difference_bits(rel):
    """Bits of the structures that grow with the BW-distance."""
    payload_bits = 8 * (
        len(rel.d1.payload()) + len(rel.d2.payload()) + len(rel.delta.payload())
    )
    return payload_bits + rel.b1.ones + rel.b2.ones


def test_space_tracks_alignment_distance():
    """Difference bits shrink as the alignment grows, and stay within the
    frozen multiple of BWD * log2(n) on the canonical pair."""
    t1, t2 = dna_pair(21, 2000, rate=0.01)
    ix1 = FMIndex.build(t1, rate=8)
    bwt1, bwt2 = bwt_of(t1), bwt_of(t2)
    full = exact_lcs(bwt1, bwt2)
    series = []
    for keep in (2, 3, 5, 9, None):
        if keep is None:
            al = full
        else:
            mask = np.arange(len(full)) % keep != 0
            al = Alignment(full.x_pos[mask], full.y_pos[mask])
        rel = RelativeIndex.build(ix1, bwt2, al)
        bwd = (t1.n + 1) + (t2.n + 1) - 2 * len(al)
        series.append((len(al), difference_bits(rel), bwd))
    lengths = [ell for ell, _, _ in series]
    bits = [b for _, b, _ in series]
    assert lengths == sorted(lengths)
    assert bits == sorted(bits, reverse=True)  # nonincreasing in ell
    log_n = math.log2(t2.n + 1)
    for _, b, bwd in series:
        assert b <= 1.0 * bwd * log_n  # frozen constant, measured 0.66 worst
