"""Common subsequences of two texts whose characters keep the same relative
row order in both BWTs, and the locating structures they make possible.

Candidates come from adjacency in the merged suffix order of the two texts;
a longest-increasing-subsequence pass picks a maximal text-monotone subset,
which is then row-order monotone automatically.  Locating walks the target
BWT and stops either on a row paired with a sampled reference row or on an
explicitly stored escape row.
"""

from bisect import bisect_left

import numpy as np

from relfm import core
from relfm.bits import BitArray
from relfm.fm import EMPTY_RANGE
from relfm.lcs import Alignment
from relfm.relative import RelativeIndex
from relfm.text import Text, bwt_from_sa, suffix_array


class TwoChoiceArray:
    """Per text position i of the first text: up to two candidate positions
    in the second text holding the same symbol.  Slot 1 is the immediately
    following row in merged suffix order, slot 2 the nearest preceding one;
    zero means undefined."""

    __slots__ = ("next_j", "prev_j")

    def __init__(self, next_j, prev_j):
        self.next_j = np.ascontiguousarray(next_j, dtype=np.int64)
        self.prev_j = np.ascontiguousarray(prev_j, dtype=np.int64)
        if self.next_j.shape != self.prev_j.shape:
            raise ValueError("mismatched slot arrays")

    @property
    def n(self):
        return self.next_j.size - 1

    @classmethod
    def from_pairs(cls, pairs):
        """Build from [(slot1, slot2), ...] rows, None for undefined."""
        nj = [0] + [p[0] or 0 for p in pairs]
        pj = [0] + [p[1] or 0 for p in pairs]
        return cls(nj, pj)

    def defined(self):
        """Number of defined candidate slots."""
        return int(np.count_nonzero(self.next_j) + np.count_nonzero(self.prev_j))


def _merged_order(codes1, codes2):
    """Suffix order of both texts merged, with a separator above the
    sentinel but below every real symbol.  Returns the merged suffix
    array plus both single-text suffix arrays read off from it."""
    n1 = codes1.size - 1
    t = np.concatenate(
        [
            codes1[:-1].astype(np.uint16) + 1,
            np.array([1], dtype=np.uint16),
            codes2[:-1].astype(np.uint16) + 1,
            np.array([0], dtype=np.uint16),
        ]
    )
    sa12 = suffix_array(t)
    s1_side = sa12 <= n1 + 1
    sa1 = sa12[s1_side].astype(np.int64)
    sa2 = (sa12[~s1_side] - (n1 + 1)).astype(np.int64)
    return sa12, s1_side, sa1, sa2


def build_candidates(s1, s2):
    """Candidate pairs for two texts: the two-choice array alone."""
    cand, _, _, _, _ = _candidate_details(s1.codes, s2.codes)
    return cand


def _candidate_details(codes1, codes2):
    n1 = codes1.size - 1
    sa12, s1_side, sa1, sa2 = _merged_order(codes1, codes2)
    L = sa12.size
    r = np.arange(L, dtype=np.int64)
    is_s2 = ~s1_side
    j_row = np.where(is_s2, sa12 - (n1 + 1) - 1, np.int64(-1))
    last_s2 = np.maximum.accumulate(np.where(is_s2, r, np.int64(-1)))

    next_j = np.zeros(n1 + 1, dtype=np.int64)
    prev_j = np.zeros(n1 + 1, dtype=np.int64)
    s1_rows = np.flatnonzero(s1_side)
    i_vals = sa12[s1_rows].astype(np.int64) - 1
    keep = i_vals >= 1
    rows = s1_rows[keep]
    ii = i_vals[keep]
    c1 = codes1[ii - 1]

    # Slot 2: nearest preceding target-side row, whatever the distance.
    pi = last_s2[rows]
    jp = np.zeros(rows.size, dtype=np.int64)
    has = pi >= 0
    jp[has] = j_row[pi[has]]
    ok = jp >= 1
    ok[ok] &= codes2[jp[ok] - 1] == c1[ok]
    prev_j[ii[ok]] = jp[ok]

    # Slot 1: the row immediately after, only if it is target-side.
    rn = rows + 1
    jn = np.zeros(rows.size, dtype=np.int64)
    has = rn < L
    jn[has] = j_row[rn[has]]
    ok = jn >= 1
    ok[ok] &= codes2[jn[ok] - 1] == c1[ok]
    next_j[ii[ok]] = jn[ok]

    return TwoChoiceArray(next_j, prev_j), sa12, s1_side, sa1, sa2


def two_choice_lis(cand):
    """Longest strictly increasing selection taking at most one slot per
    row; ties in the patience piles break toward the smaller value.
    Returns [(row, slot)] in row order."""
    next_j = cand.next_j
    prev_j = cand.prev_j
    tails = []
    owner = []
    nodes = []
    for i in range(1, next_j.size):
        v1 = int(next_j[i])
        v2 = int(prev_j[i])
        pair = [(v1, 1), (v2, 2)]
        pair.sort(reverse=True)  # larger value first so both slots stay usable
        for v, slot in pair:
            if v <= 0:
                continue
            pos = bisect_left(tails, v)
            pred = owner[pos - 1] if pos > 0 else -1
            nodes.append((i, slot, pred))
            if pos == len(tails):
                tails.append(v)
                owner.append(len(nodes) - 1)
            else:
                tails[pos] = v
                owner[pos] = len(nodes) - 1
    out = []
    at = owner[-1] if owner else -1
    while at >= 0:
        i, slot, pred = nodes[at]
        out.append((i, slot))
        at = pred
    out.reverse()
    return out


def check_bwt_invariant(s1, s2, g):
    """True when the common subsequence g keeps identical relative row
    order in both BWTs.  Raises if g is not a common subsequence at all
    (sentinel positions n+1 are admissible and match each other)."""
    codes1 = s1.codes
    codes2 = s2.codes
    if not g.validate(codes1, codes2):
        raise ValueError("not a common subsequence")
    if len(g) == 0:
        return True
    n1 = codes1.size - 1
    n2 = codes2.size - 1
    sa1 = suffix_array(codes1)
    sa2 = suffix_array(codes2)
    isa1 = np.zeros(n1 + 2, dtype=np.int64)
    isa1[sa1] = np.arange(n1 + 1)
    isa2 = np.zeros(n2 + 2, dtype=np.int64)
    isa2[sa2] = np.arange(n2 + 1)
    v = isa1[(g.x_pos % (n1 + 1)) + 1]
    w = isa2[(g.y_pos % (n2 + 1)) + 1]
    return bool(np.array_equal(np.argsort(v), np.argsort(w)))


class InvariantAlignment:
    """A BWT-order-invariant common subsequence of two sentinel-terminated
    texts, closed with the sentinel pair, carried in both text positions
    and the induced (sorted) BWT row pairs."""

    __slots__ = ("i_pos", "j_pos", "n1", "n2", "row_x", "row_y")

    def __init__(self, i_pos, j_pos, n1, n2, row_x, row_y):
        self.i_pos = np.ascontiguousarray(i_pos, dtype=np.int64)
        self.j_pos = np.ascontiguousarray(j_pos, dtype=np.int64)
        self.n1 = int(n1)
        self.n2 = int(n2)
        self.row_x = np.ascontiguousarray(row_x, dtype=np.int64)
        self.row_y = np.ascontiguousarray(row_y, dtype=np.int64)

    def __len__(self):
        return int(self.i_pos.size)

    def as_alignment(self):
        """Text-space alignment (sentinel pair included)."""
        return Alignment(self.i_pos, self.j_pos)

    def row_alignment(self):
        """BWT-row-space alignment, 1-based, increasing on both sides."""
        return Alignment(self.row_x + 1, self.row_y + 1)


def _invariant_pipeline(text1, text2):
    codes1 = text1.codes
    codes2 = text2.codes
    n1 = codes1.size - 1
    n2 = codes2.size - 1
    cand, _, _, sa1, sa2 = _candidate_details(codes1, codes2)
    isa1 = np.zeros(n1 + 2, dtype=np.int64)
    isa1[sa1] = np.arange(n1 + 1)
    isa2 = np.zeros(n2 + 2, dtype=np.int64)
    isa2[sa2] = np.arange(n2 + 1)

    # Keep only pairs ordered consistently with the sentinel pair, which is
    # appended unconditionally afterwards.
    v0 = isa1[1]
    w0 = isa2[1]
    ii = np.arange(1, n1 + 1, dtype=np.int64)
    side1 = isa1[ii + 1] < v0

    def consistent(j_arr):
        keep = j_arr[1:] >= 1
        side2 = np.zeros(n1, dtype=bool)
        side2[keep] = isa2[j_arr[1:][keep] + 1] < w0
        return keep & (side1 == side2)

    nj = cand.next_j.copy()
    pj = cand.prev_j.copy()
    nj[1:][~consistent(nj)] = 0
    pj[1:][~consistent(pj)] = 0
    filtered = TwoChoiceArray(nj, pj)

    chosen = two_choice_lis(filtered)
    i_pos = np.empty(len(chosen) + 1, dtype=np.int64)
    j_pos = np.empty(len(chosen) + 1, dtype=np.int64)
    for k, (i, slot) in enumerate(chosen):
        i_pos[k] = i
        j_pos[k] = nj[i] if slot == 1 else pj[i]
    i_pos[-1] = n1 + 1
    j_pos[-1] = n2 + 1

    v = isa1[(i_pos % (n1 + 1)) + 1]
    w = isa2[(j_pos % (n2 + 1)) + 1]
    order = np.argsort(v)
    g = InvariantAlignment(i_pos, j_pos, n1, n2, v[order], w[order])
    return g, sa1, sa2, isa1, isa2


def invariant_subsequence(text1, text2):
    """BWT-order-invariant common subsequence of two texts (with sentinel
    pair), long in practice on lightly mutated inputs."""
    g, _, _, _, _ = _invariant_pipeline(text1, text2)
    return g


class RelativeSample:
    """Locating support for a relative index: masks pairing text positions
    of both texts, plus escape rows that bound every sample walk."""

    __slots__ = ("rel", "m1", "m2", "esc_rows", "esc_pos", "gap", "_view")

    def __init__(self, rel, m1, m2, esc_rows, esc_pos, gap):
        self.rel = rel
        self.m1 = m1
        self.m2 = m2
        self.esc_rows = np.ascontiguousarray(esc_rows, dtype=np.int64)
        self.esc_pos = np.ascontiguousarray(esc_pos, dtype=np.int64)
        self.gap = int(gap)
        ref = rel.ref
        self._view = core.kernel.RelLocView(
            rel._view,
            ref.marks._view,
            ref.sa_vals,
            m1._view,
            m2._view,
            self.esc_rows,
            self.esc_pos,
            ref.n + 1,
        )

    @classmethod
    def build(cls, rel, g, sa2, escape_gap=None):
        ref = rel.ref
        n1 = ref.n
        n2 = rel.n2
        gap = int(escape_gap) if escape_gap else 4 * ref.rate
        mask1 = np.ones(n1 + 1, dtype=np.uint8)
        mask1[g.i_pos - 1] = 0
        mask2 = np.ones(n2 + 1, dtype=np.uint8)
        mask2[g.j_pos - 1] = 0
        m1 = BitArray(mask1)
        m2 = BitArray(mask2)

        # Walk the (single) LF cycle of the target, mark rows where a walk
        # may stop, then thin long stop-free stretches with escape rows.
        rows = n2 + 1
        isa2 = np.zeros(n2 + 2, dtype=np.int64)
        isa2[sa2] = np.arange(rows)
        lf_arr = isa2[(sa2 - 2) % rows + 1]
        stop_mask = np.zeros(rows, dtype=bool)
        ref_marked = ref.marks.tobits()
        stop_mask[g.row_y[ref_marked[g.row_x] == 1]] = True
        cycle = np.empty(rows, dtype=np.int64)
        cur = 0
        for t in range(rows):
            cycle[t] = cur
            cur = int(lf_arr[cur])
        stop_t = np.flatnonzero(stop_mask[cycle])
        step = gap + 1
        if stop_t.size == 0:
            esc_t = np.arange(0, rows, step, dtype=np.int64)
        else:
            pieces = []
            for idx in range(stop_t.size):
                t_a = int(stop_t[idx])
                t_b = int(stop_t[(idx + 1) % stop_t.size])
                if t_b <= t_a:
                    t_b += rows
                if t_b - t_a > step:
                    pieces.append(np.arange(t_a + step, t_b, step, dtype=np.int64))
            esc_t = np.concatenate(pieces) % rows if pieces else np.empty(0, np.int64)
        esc_rows = cycle[esc_t]
        vals = sa2[esc_rows]
        esc_pos = np.where(vals >= 2, vals - 1, n2 + 1)
        order = np.argsort(esc_rows)
        return cls(rel, m1, m2, esc_rows[order], esc_pos[order], gap)

    # -- queries ---------------------------------------------------------

    def locate(self, rg):
        """Sorted target text positions for the rows in rg."""
        if rg.empty:
            return []
        out = self._view.locate_range(rg.lo - 1, rg.hi)
        out.sort()
        return out

    def locate_pattern(self, pattern):
        return self.locate(self.rel.range_of(pattern))

    def count(self, pattern):
        return self.rel.count(pattern)

    # -- persistence -----------------------------------------------------

    def payload(self):
        import struct

        parts = [
            self.rel.ref.sample_digest(),
            struct.pack("<IQ", self.gap, self.esc_rows.size),
            self.esc_rows.tobytes(),
            self.esc_pos.tobytes(),
            self.m1.payload(),
            self.m2.payload(),
        ]
        return b"".join(parts)

    @classmethod
    def from_payload(cls, buf, rel):
        import struct

        if bytes(buf[:8]) != rel.ref.sample_digest():
            raise ValueError("reference mismatch")
        gap, k = struct.unpack_from("<IQ", buf, 8)
        off = 20
        esc_rows = np.frombuffer(buf, dtype=np.int64, count=k, offset=off).copy()
        off += 8 * k
        esc_pos = np.frombuffer(buf, dtype=np.int64, count=k, offset=off).copy()
        off += 8 * k
        m1, off = BitArray.from_payload(buf, off)
        m2, off = BitArray.from_payload(buf, off)
        return cls(rel, m1, m2, esc_rows, esc_pos, gap)

    def size_bytes(self):
        return (
            self.m1.size_bytes()
            + self.m2.size_bytes()
            + self.esc_rows.nbytes
            + self.esc_pos.nbytes
        )


def rel_locate(sample, rg):
    """Module-level alias: sorted target positions for a row range."""
    return sample.locate(rg)


def build_relative_sample(ref, target_text, source_text=None, escape_gap=None):
    """Full pipeline: invariant subsequence, relative index, locate sample.

    The reference text is recovered from the index when not supplied.
    """
    if source_text is None:
        raw = ref.extract(1, ref.n)
        source_text = Text.from_bytes(raw, alphabet=ref.alphabet)
    g, _, sa2, _, _ = _invariant_pipeline(source_text, target_text)
    bwt2 = bwt_from_sa(target_text.codes, sa2)
    rel = RelativeIndex.build(ref, bwt2, g.row_alignment())
    return RelativeSample.build(rel, g, sa2, escape_gap)


def sample_reuse_position(b1, b2, r_bits, a_vals, m1, m2, j):
    """Reference-sample reuse chain for target row j, evaluated literally
    over the given bit arrays: map the row to the reference, read the
    sampled value through r_bits/a_vals, then translate the position
    through the alignment masks."""
    z = b2.rank0(j)
    k = b1.select0(z)
    r1 = r_bits.rank1(k)
    val = a_vals[r1 - 1]
    m = m1.rank0(val)
    return m2.select0(m)


def reduction_strings(p1, p2):
    """Unary-coded permutation pair over a shared three-letter alphabet;
    matching 'A' markers relate the two."""
    out = []
    for perm, filler in ((p1, b"B"), (p2, b"C")):
        k = len(perm)
        if sorted(perm) != list(range(1, k + 1)):
            raise ValueError("invalid permutation")
        out.append(b"".join(b"A" + filler * v for v in perm))
    return out[0], out[1]
