"""Packed bit arrays and wavelet sequences with rank/select support.

Construction is vectorised numpy; queries run on the kernel selected in
`relfm.core` (compiled when available, pure Python otherwise).  Bits pack
little-endian into 64-bit words; one-counts are kept absolute per
65536-bit superblock and 16-bit relative per 512-bit block, so rank reads
at most eight words.  Select binary-searches the directories.

Public rank/select use sequence semantics: rank takes a prefix length
(0 allowed), select returns the 1-based position of the j-th occurrence.
"""

import struct

import numpy as np

from relfm import core

BLOCK_BITS = 512
SUPER_BITS = 65536
WORDS_PER_BLOCK = BLOCK_BITS // 64
BLOCKS_PER_SUPER = SUPER_BITS // BLOCK_BITS


def pack_bits(bits):
    """Pack a 0/1 array into little-endian uint64 words."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    if bits.size == 0:
        return np.zeros(0, dtype=np.uint64)
    packed = np.packbits(bits, bitorder="little")
    pad = (-packed.size) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return packed.view(np.uint64)


def unpack_bits(words, nbits):
    """Inverse of pack_bits."""
    if nbits == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits].copy()


def popcount_words(words):
    """Per-word population counts."""
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(words).astype(np.int64)
    x = words.astype(np.uint64, copy=True)
    m1 = np.uint64(0x5555555555555555)
    m2 = np.uint64(0x3333333333333333)
    m4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    h = np.uint64(0x0101010101010101)
    x = x - ((x >> np.uint64(1)) & m1)
    x = (x & m2) + ((x >> np.uint64(2)) & m2)
    x = (x + (x >> np.uint64(4))) & m4
    return ((x * h) >> np.uint64(56)).astype(np.int64)


def rank_directories(words, nbits):
    """(superblock absolute counts, block relative counts, total ones)."""
    nblocks = nbits // BLOCK_BITS + 1
    nsupers = nbits // SUPER_BITS + 1
    per_word = popcount_words(words)
    padded = np.zeros(nblocks * WORDS_PER_BLOCK, dtype=np.int64)
    padded[: per_word.size] = per_word
    per_block = padded.reshape(nblocks, WORDS_PER_BLOCK).sum(axis=1)
    cum = np.zeros(nblocks + 1, dtype=np.int64)
    np.cumsum(per_block, out=cum[1:])
    supers = cum[np.arange(nsupers) * BLOCKS_PER_SUPER].astype(np.uint64)
    super_base = (np.arange(nblocks) // BLOCKS_PER_SUPER) * BLOCKS_PER_SUPER
    blocks = (cum[:nblocks] - cum[super_base]).astype(np.uint16)
    return supers, blocks, int(cum[nblocks])


class BitArray:
    """Immutable bit vector with O(1) rank and binary-search select."""

    __slots__ = ("nbits", "ones", "words", "supers", "blocks", "_view")

    def __init__(self, bits=None, *, words=None, nbits=None):
        if bits is not None:
            bits = np.asarray(bits, dtype=np.uint8)
            nbits = int(bits.size)
            words = pack_bits(bits)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint64)
            nbits = int(nbits)
        if words.size * 64 < nbits:
            raise ValueError("word buffer shorter than bit length")
        self.nbits = nbits
        self.words = words
        self.supers, self.blocks, self.ones = rank_directories(words, nbits)
        self._view = core.kernel.BitView(words, self.supers, self.blocks, nbits, self.ones)

    @property
    def zeros(self):
        return self.nbits - self.ones

    def __len__(self):
        return self.nbits

    def __getitem__(self, i):
        """Bit at 0-based position i."""
        if not 0 <= i < self.nbits:
            raise IndexError("bit index out of range")
        return self._view.get(i)

    def rank1(self, i):
        """Set bits in the length-i prefix."""
        if not 0 <= i <= self.nbits:
            raise ValueError("out of range")
        return self._view.rank1(i)

    def rank0(self, i):
        if not 0 <= i <= self.nbits:
            raise ValueError("out of range")
        return i - self._view.rank1(i)

    def select1(self, j):
        """1-based position of the j-th set bit."""
        if not 1 <= j <= self.ones:
            raise ValueError("select overflow")
        return self._view.select1(j) + 1

    def select0(self, j):
        """1-based position of the j-th unset bit."""
        if not 1 <= j <= self.zeros:
            raise ValueError("select overflow")
        return self._view.select0(j) + 1

    def tobits(self):
        return unpack_bits(self.words, self.nbits)

    def size_bytes(self):
        return self.words.nbytes + self.supers.nbytes + self.blocks.nbytes

    def payload(self):
        """Serialized form: 64-bit length then packed words (directories rebuilt)."""
        return struct.pack("<Q", self.nbits) + self.words.tobytes()

    @classmethod
    def from_payload(cls, buf, offset=0):
        (nbits,) = struct.unpack_from("<Q", buf, offset)
        offset += 8
        nwords = (nbits + 63) // 64
        words = np.frombuffer(buf, dtype=np.uint64, count=nwords, offset=offset).copy()
        return cls(words=words, nbits=nbits), offset + nwords * 8


def _wavelet_depth(sigma):
    return max(1, int(sigma - 1).bit_length())


class WaveletSequence:
    """Code sequence with rank/access via per-level bit arrays.

    Level bits take the codes' bits from most significant down; after each
    level zeros route stably left and ones right, forming a balanced code
    tree.  `zpath[a]` caches the empty-prefix descent along code a's bits,
    making rank a single descent.
    """

    __slots__ = ("sigma", "length", "depth", "levels", "zeros", "zpath", "_view")

    def __init__(self, codes=None, sigma=None, *, levels=None, length=None):
        if codes is not None:
            codes = np.asarray(codes, dtype=np.uint8)
            if sigma is None:
                sigma = int(codes.max()) + 1 if codes.size else 1
            if codes.size and int(codes.max()) >= sigma:
                raise ValueError("symbol out of alphabet")
            length = int(codes.size)
            depth = _wavelet_depth(sigma)
            levels = []
            cur = codes
            for lev in range(depth):
                bits = (cur >> (depth - 1 - lev)) & 1
                levels.append(BitArray(bits))
                cur = cur[np.argsort(bits, kind="stable")]
        else:
            length = int(length)
            depth = _wavelet_depth(sigma)
            if len(levels) != depth:
                raise ValueError("level count does not match alphabet size")
        self.sigma = int(sigma)
        self.length = length
        self.depth = depth
        self.levels = levels
        self.zeros = [lev.zeros for lev in levels]
        self.zpath = self._build_zpath()
        self._view = core.kernel.WmView(
            [lev._view for lev in levels], self.zeros, self.zpath, self.sigma, length
        )

    def _build_zpath(self):
        out = []
        for a in range(self.sigma):
            pos = 0
            path = [0]
            for lev in range(self.depth):
                ones = self.levels[lev]._view.rank1(pos)
                if (a >> (self.depth - 1 - lev)) & 1:
                    pos = self.zeros[lev] + ones
                else:
                    pos = pos - ones
                path.append(pos)
            out.append(path)
        return out

    def __len__(self):
        return self.length

    def rank(self, a, i):
        """Occurrences of code a in the length-i prefix."""
        if not 0 <= a < self.sigma:
            raise ValueError("symbol out of alphabet")
        if not 0 <= i <= self.length:
            raise ValueError("out of range")
        return self._view.rank(a, i)

    def access(self, i):
        """Code at 1-based position i."""
        if not 1 <= i <= self.length:
            raise ValueError("out of range")
        return self._view.access(i - 1)

    def decode(self, lo, hi):
        """Codes at 0-based positions [lo, hi) as an array."""
        if not 0 <= lo <= hi <= self.length:
            raise ValueError("out of range")
        out = np.zeros(hi - lo, dtype=np.uint8)
        if hi > lo:
            self._view.decode(lo, hi, out)
        return out

    def frequencies(self):
        """Occurrence count per code."""
        return np.array([self._view.rank(a, self.length) for a in range(self.sigma)])

    def size_bytes(self):
        return sum(lev.size_bytes() for lev in self.levels)

    def payload(self):
        head = struct.pack("<HQ", self.sigma, self.length)
        return head + b"".join(lev.words.tobytes() for lev in self.levels)

    @classmethod
    def from_payload(cls, buf, offset=0):
        sigma, length = struct.unpack_from("<HQ", buf, offset)
        offset += 10
        nwords = (length + 63) // 64
        levels = []
        for _ in range(_wavelet_depth(sigma)):
            words = np.frombuffer(buf, dtype=np.uint64, count=nwords, offset=offset).copy()
            levels.append(BitArray(words=words, nbits=length))
            offset += nwords * 8
        return cls(sigma=sigma, levels=levels, length=length), offset
