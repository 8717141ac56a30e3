"""Relative FM-index for counting: stores a target BWT as its difference
from a reference BWT along a common subsequence of the two.

Rank over the target decomposes into reference rank at a mapped prefix,
minus the reference-only contribution, plus the target-only contribution;
cumulative counts are patched per symbol where the texts disagree.
"""

import struct

import numpy as np

from relfm import core
from relfm.bits import BitArray, WaveletSequence
from relfm.fm import EMPTY_RANGE, SuffixRange
from relfm.text import char_counts


class CountDelta:
    """Symbols whose cumulative count differs from the reference, with the
    target's value; unlisted symbols fall through to the reference."""

    __slots__ = ("symbols", "s2_before")

    def __init__(self, symbols, s2_before):
        self.symbols = [int(a) for a in symbols]
        self.s2_before = [int(v) for v in s2_before]
        if len(self.symbols) != len(self.s2_before):
            raise ValueError("mismatched delta lengths")

    @classmethod
    def from_counts(cls, ref_counts, target_counts, sigma):
        syms = [a for a in range(sigma) if ref_counts[a] != target_counts[a]]
        return cls(syms, [int(target_counts[a]) for a in syms])

    def payload(self):
        head = struct.pack("<H", len(self.symbols))
        body = b"".join(
            struct.pack("<BQ", a, v) for a, v in zip(self.symbols, self.s2_before)
        )
        return head + body

    @classmethod
    def from_payload(cls, buf, offset):
        (k,) = struct.unpack_from("<H", buf, offset)
        offset += 2
        syms = []
        vals = []
        for _ in range(k):
            a, v = struct.unpack_from("<BQ", buf, offset)
            offset += 9
            syms.append(a)
            vals.append(v)
        return cls(syms, vals), offset

    def size_bytes(self):
        return 2 + 9 * len(self.symbols)


class RelativeIndex:
    """Counting-capable index over a target text, expressed relative to a
    reference FMIndex through a BWT common subsequence."""

    __slots__ = ("ref", "n2", "b1", "b2", "d1", "d2", "delta", "_view")

    def __init__(self, ref, n2, b1, b2, d1, d2, delta):
        self.ref = ref
        self.n2 = int(n2)
        self.b1 = b1
        self.b2 = b2
        self.d1 = d1
        self.d2 = d2
        self.delta = delta
        self._view = core.kernel.RelView(
            ref._view,
            b1._view,
            b2._view,
            d1._view,
            d2._view,
            list(delta.symbols),
            list(delta.s2_before),
        )

    @classmethod
    def build(cls, ref, bwt2, align):
        """Difference ref against the target BWT along `align`, validating
        that the alignment really is a common subsequence of the two BWTs."""
        bwt2 = np.ascontiguousarray(bwt2, dtype=np.uint8)
        n2 = bwt2.size - 1
        bwt1 = ref.bwt.decode(0, ref.rows)
        if not align.validate(bwt1, bwt2):
            raise ValueError("not a common subsequence")
        sigma = ref.sigma
        mask1 = np.ones(ref.rows, dtype=np.uint8)
        mask1[align.x_pos - 1] = 0
        mask2 = np.ones(bwt2.size, dtype=np.uint8)
        mask2[align.y_pos - 1] = 0
        b1 = BitArray(mask1)
        b2 = BitArray(mask2)
        d1 = WaveletSequence(bwt1[mask1 == 1], sigma=sigma)
        d2 = WaveletSequence(bwt2[mask2 == 1], sigma=sigma)
        delta = CountDelta.from_counts(ref.counts, char_counts(bwt2, sigma), sigma)
        return cls(ref, n2, b1, b2, d1, d2, delta)

    @property
    def rows(self):
        return self.n2 + 1

    @property
    def sigma(self):
        return self.ref.sigma

    @property
    def alphabet(self):
        return self.ref.alphabet

    # -- queries ---------------------------------------------------------

    def rel_rank(self, a, i):
        """Occurrences of code `a` in the first `i` target BWT symbols."""
        if not 0 <= a < self.sigma:
            raise ValueError("symbol out of alphabet")
        if not 0 <= i <= self.rows:
            raise ValueError("out of range")
        return self._view.rank(a, i)

    def rel_cumulative(self, a):
        """Target symbols strictly smaller than code `a`."""
        if not 0 <= a < self.sigma:
            raise ValueError("symbol out of alphabet")
        return self._view.cum(a)

    def access_bwt(self, j):
        """Target BWT symbol code at 1-based row j."""
        if not 1 <= j <= self.rows:
            raise ValueError("out of range")
        return self._view.access(j - 1)

    def backward_extend(self, rg, a):
        if not 0 <= a < self.sigma:
            raise ValueError("symbol out of alphabet")
        if rg.empty:
            return EMPTY_RANGE
        s, e = self._view.extend(rg.lo - 1, rg.hi, a)
        return SuffixRange(s + 1, e) if s < e else EMPTY_RANGE

    def full_range(self):
        return SuffixRange(1, self.rows)

    def range_of(self, pattern):
        if len(pattern) == 0:
            raise ValueError("empty pattern")
        if isinstance(pattern, (bytes, bytearray, memoryview)):
            codes = self.alphabet.try_encode(pattern)
            if codes is None:
                return EMPTY_RANGE
        else:
            codes = np.asarray(pattern, dtype=np.uint8)
        s, e = self._view.find(codes)
        return SuffixRange(s + 1, e) if s < e else EMPTY_RANGE

    def count(self, pattern):
        """Occurrences of the pattern in the target text."""
        return len(self.range_of(pattern))

    # -- persistence -----------------------------------------------------

    def payload(self):
        parts = [self.ref.digest(), struct.pack("<Q", self.n2)]
        parts.append(self.b1.payload())
        parts.append(self.b2.payload())
        parts.append(self.d1.payload())
        parts.append(self.d2.payload())
        parts.append(self.delta.payload())
        return b"".join(parts)

    @classmethod
    def from_payload(cls, buf, ref):
        if bytes(buf[:8]) != ref.digest():
            raise ValueError("reference mismatch")
        (n2,) = struct.unpack_from("<Q", buf, 8)
        off = 16
        b1, off = BitArray.from_payload(buf, off)
        b2, off = BitArray.from_payload(buf, off)
        d1, off = WaveletSequence.from_payload(buf, off)
        d2, off = WaveletSequence.from_payload(buf, off)
        delta, off = CountDelta.from_payload(buf, off)
        return cls(ref, n2, b1, b2, d1, d2, delta)

    def size_bytes(self):
        """Bytes owned by the relative structures (reference excluded)."""
        return (
            self.b1.size_bytes()
            + self.b2.size_bytes()
            + self.d1.size_bytes()
            + self.d2.size_bytes()
            + self.delta.size_bytes()
        )


def build_relative(ref, bwt2, align):
    """Module-level alias for RelativeIndex.build."""
    return RelativeIndex.build(ref, bwt2, align)
