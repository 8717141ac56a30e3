"""Standalone FM-index: counting, locating via position samples, extraction.

Rows are the sorted rotations of the sentinel-terminated text, so there are
n+1 of them; public row and text positions are 1-based.  Locating samples
every text position congruent to 1 modulo the rate, plus the sentinel
position n+1, so every LF-walk stops within rate steps without wrapping.
"""

import hashlib
import struct

import numpy as np

from relfm import core
from relfm.bits import BitArray, WaveletSequence
from relfm.text import Text, bwt_from_sa, char_counts, suffix_array


class SuffixRange:
    """Inclusive 1-based row interval; empty when lo > hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = int(lo)
        self.hi = int(hi)

    @property
    def empty(self):
        return self.lo > self.hi

    def __len__(self):
        return 0 if self.empty else self.hi - self.lo + 1

    def __eq__(self, other):
        if not isinstance(other, SuffixRange):
            return NotImplemented
        if self.empty and other.empty:
            return True
        return (self.lo, self.hi) == (other.lo, other.hi)

    def __repr__(self):
        return f"SuffixRange({self.lo}, {self.hi})"


EMPTY_RANGE = SuffixRange(1, 0)


class FMIndex:
    """Wavelet-coded BWT with cumulative counts and a two-way position sample."""

    __slots__ = (
        "alphabet",
        "n",
        "rate",
        "bwt",
        "counts",
        "marks",
        "sa_vals",
        "inv_rows",
        "_view",
        "_digest",
    )

    def __init__(self, alphabet, n, rate, bwt, marks, sa_vals, inv_rows):
        self.alphabet = alphabet
        self.n = int(n)
        self.rate = int(rate)
        self.bwt = bwt
        freq = bwt.frequencies()
        self.counts = np.zeros(alphabet.sigma + 1, dtype=np.int64)
        np.cumsum(freq[: alphabet.sigma], out=self.counts[1:])
        self.marks = marks
        self.sa_vals = np.ascontiguousarray(sa_vals, dtype=np.uint64)
        self.inv_rows = np.ascontiguousarray(inv_rows, dtype=np.uint64)
        self._view = core.kernel.FmView(bwt._view, self.counts[: alphabet.sigma])
        self._digest = None

    @classmethod
    def build(cls, text, rate=32):
        """Index a Text; `rate` is the sampling stride for locate/extract."""
        if rate < 1:
            raise ValueError("rate must be positive")
        codes = text.codes
        n = text.n
        sa = suffix_array(codes)
        bw = bwt_from_sa(codes, sa)
        wavelet = WaveletSequence(bw, sigma=text.alphabet.sigma)
        sampled = ((sa - 1) % rate == 0) | (sa == n + 1)
        marks = BitArray(sampled.astype(np.uint8))
        sa_vals = sa[sampled].astype(np.uint64)
        isa = np.zeros(n + 2, dtype=np.int64)
        isa[sa] = np.arange(n + 1)
        positions = 1 + rate * np.arange(n // rate + 1, dtype=np.int64)
        inv_rows = isa[positions].astype(np.uint64)
        return cls(text.alphabet, n, rate, wavelet, marks, sa_vals, inv_rows)

    @property
    def rows(self):
        """Number of BWT rows (text length plus sentinel)."""
        return self.n + 1

    @property
    def sigma(self):
        return self.alphabet.sigma

    # -- queries ---------------------------------------------------------

    def backward_extend(self, rg, a):
        """Rows whose suffix starts with symbol code `a` then the old range."""
        if not 0 <= a < self.sigma:
            raise ValueError("symbol out of alphabet")
        if rg.empty:
            return EMPTY_RANGE
        s, e = self._view.extend(rg.lo - 1, rg.hi, a)
        return SuffixRange(s + 1, e) if s < e else EMPTY_RANGE

    def full_range(self):
        return SuffixRange(1, self.rows)

    def range_of(self, pattern):
        """Row range of a byte pattern (empty range when absent)."""
        codes = self._pattern_codes(pattern)
        if codes is None:
            return EMPTY_RANGE
        s, e = self._view.find(codes)
        return SuffixRange(s + 1, e) if s < e else EMPTY_RANGE

    def _pattern_codes(self, pattern):
        if len(pattern) == 0:
            raise ValueError("empty pattern")
        if isinstance(pattern, (bytes, bytearray, memoryview)):
            return self.alphabet.try_encode(pattern)
        return np.asarray(pattern, dtype=np.uint8)

    def count(self, pattern):
        """Occurrences of the pattern in the text (0 for foreign bytes)."""
        rg = self.range_of(pattern)
        return len(rg)

    def lf(self, j):
        """Row of the text-preceding symbol of row j (1-based)."""
        if not 1 <= j <= self.rows:
            raise ValueError("out of range")
        return self._view.lf(j - 1) + 1

    def access_bwt(self, j):
        """BWT symbol code at 1-based row j."""
        if not 1 <= j <= self.rows:
            raise ValueError("out of range")
        return self.bwt.access(j)

    def locate(self, rg):
        """Sorted text positions of the suffixes in rows [rg.lo, rg.hi]."""
        if rg.empty:
            return []
        out = self._view.locate_range(
            rg.lo - 1, rg.hi, self.marks._view, self.sa_vals, self.rate
        )
        out.sort()
        return out

    def locate_pattern(self, pattern):
        return self.locate(self.range_of(pattern))

    def extract(self, i, j):
        """Text substring at 1-based inclusive positions [i, j]."""
        if not 1 <= i <= j <= self.n:
            raise ValueError("out of range")
        m = -(-j // self.rate)  # first sampled position >= j+1 is 1 + m*rate
        if m < self.inv_rows.size:
            v = 1 + m * self.rate
            row = int(self.inv_rows[m])
        else:
            v = self.n + 1
            row = 0  # sentinel row is always first
        buf = np.zeros(v - i, dtype=np.uint8)
        self._view.extract_codes(row, v - i, buf)
        return self.alphabet.decode(buf[: j - i + 1])

    # -- persistence -----------------------------------------------------

    def payload(self):
        head = struct.pack("<QII", self.n, self.rate, 0)
        parts = [head, self.bwt.payload(), self.marks.payload()]
        parts.append(struct.pack("<Q", self.sa_vals.size) + self.sa_vals.tobytes())
        parts.append(struct.pack("<Q", self.inv_rows.size) + self.inv_rows.tobytes())
        return b"".join(parts)

    @classmethod
    def from_payload(cls, buf, alphabet):
        n, rate, _ = struct.unpack_from("<QII", buf, 0)
        off = 16
        wavelet, off = WaveletSequence.from_payload(buf, off)
        marks, off = BitArray.from_payload(buf, off)
        (k,) = struct.unpack_from("<Q", buf, off)
        off += 8
        sa_vals = np.frombuffer(buf, dtype=np.uint64, count=k, offset=off).copy()
        off += k * 8
        (k,) = struct.unpack_from("<Q", buf, off)
        off += 8
        inv_rows = np.frombuffer(buf, dtype=np.uint64, count=k, offset=off).copy()
        if wavelet.sigma != alphabet.sigma:
            raise ValueError("alphabet does not match index payload")
        return cls(alphabet, n, rate, wavelet, marks, sa_vals, inv_rows)

    def digest(self):
        """Content digest binding relative indexes to this reference."""
        if self._digest is None:
            self._digest = hashlib.blake2b(self.payload(), digest_size=8).digest()
        return self._digest

    def sample_digest(self):
        """Digest of just the position sample (marks and values)."""
        h = hashlib.blake2b(digest_size=8)
        h.update(self.marks.payload())
        h.update(self.sa_vals.tobytes())
        return h.digest()

    def size_bytes(self):
        return (
            self.bwt.size_bytes()
            + self.marks.size_bytes()
            + self.sa_vals.nbytes
            + self.inv_rows.nbytes
            + self.counts.nbytes
        )
