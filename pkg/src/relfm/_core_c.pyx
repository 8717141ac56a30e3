# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled query kernels.

Same structures and semantics as ``relfm._core_py`` (the reference
implementation); only the loops are typed.  Any behaviour difference
between the two modules is a bug.
"""

from libc.stdint cimport int64_t, uint8_t, uint16_t, uint64_t

import numpy as np

BACKEND = "c"

cdef extern from *:
    """
    #define popcnt64(x) __builtin_popcountll((unsigned long long)(x))
    #define ctz64(x) __builtin_ctzll((unsigned long long)(x))
    """
    int popcnt64(uint64_t x) nogil
    int ctz64(uint64_t x) nogil


cdef class BitView:
    """Read-only bit vector with O(1) rank and binary-search select."""

    cdef uint64_t[::1] words
    cdef uint64_t[::1] supers
    cdef uint16_t[::1] blocks
    cdef readonly Py_ssize_t nbits
    cdef readonly Py_ssize_t ones

    def __init__(self, words, supers, blocks, nbits, ones):
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.supers = np.ascontiguousarray(supers, dtype=np.uint64)
        self.blocks = np.ascontiguousarray(blocks, dtype=np.uint16)
        self.nbits = nbits
        self.ones = ones

    cpdef int get(self, Py_ssize_t p):
        return <int>((self.words[p >> 6] >> (p & 63)) & 1)

    cpdef Py_ssize_t rank1(self, Py_ssize_t i):
        cdef Py_ssize_t cnt, w, wend, rem
        if i <= 0:
            return 0
        if i > self.nbits:
            i = self.nbits
        cnt = <Py_ssize_t>self.supers[i >> 16] + self.blocks[i >> 9]
        w = (i >> 9) << 3
        wend = i >> 6
        while w < wend:
            cnt += popcnt64(self.words[w])
            w += 1
        rem = i & 63
        if rem:
            cnt += popcnt64(self.words[wend] & ((<uint64_t>1 << rem) - 1))
        return cnt

    cpdef Py_ssize_t rank0(self, Py_ssize_t i):
        if i <= 0:
            return 0
        if i > self.nbits:
            i = self.nbits
        return i - self.rank1(i)

    cpdef Py_ssize_t select1(self, Py_ssize_t j):
        """0-based position of the j-th (1-based) set bit."""
        cdef Py_ssize_t lo, hi, mid, rem, b_lo, b_hi, w, c
        cdef uint64_t x
        if j < 1 or j > self.ones:
            raise ValueError(f"select1({j}) out of range (ones={self.ones})")
        lo = 0
        hi = self.supers.shape[0] - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if <Py_ssize_t>self.supers[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - <Py_ssize_t>self.supers[lo]
        b_lo = lo << 7
        b_hi = self.blocks.shape[0] - 1
        if b_lo + 127 < b_hi:
            b_hi = b_lo + 127
        while b_lo < b_hi:
            mid = (b_lo + b_hi + 1) >> 1
            if self.blocks[mid] < rem:
                b_lo = mid
            else:
                b_hi = mid - 1
        rem -= self.blocks[b_lo]
        w = b_lo << 3
        while True:
            c = popcnt64(self.words[w])
            if rem <= c:
                break
            rem -= c
            w += 1
        x = self.words[w]
        while rem > 1:
            x &= x - 1
            rem -= 1
        return (w << 6) + _lowest_bit(x)

    cpdef Py_ssize_t select0(self, Py_ssize_t j):
        """0-based position of the j-th (1-based) zero bit."""
        cdef Py_ssize_t zeros, lo, hi, mid, rem, b_lo, b_hi, base, w, c
        cdef uint64_t x
        zeros = self.nbits - self.ones
        if j < 1 or j > zeros:
            raise ValueError(f"select0({j}) out of range (zeros={zeros})")
        lo = 0
        hi = self.supers.shape[0] - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (mid << 16) - <Py_ssize_t>self.supers[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - ((lo << 16) - <Py_ssize_t>self.supers[lo])
        b_lo = lo << 7
        base = b_lo
        b_hi = self.blocks.shape[0] - 1
        if b_lo + 127 < b_hi:
            b_hi = b_lo + 127
        while b_lo < b_hi:
            mid = (b_lo + b_hi + 1) >> 1
            if ((mid - base) << 9) - self.blocks[mid] < rem:
                b_lo = mid
            else:
                b_hi = mid - 1
        rem -= ((b_lo - base) << 9) - self.blocks[b_lo]
        w = b_lo << 3
        while True:
            c = 64 - popcnt64(self.words[w])
            if rem <= c:
                break
            rem -= c
            w += 1
        x = ~self.words[w]
        while rem > 1:
            x &= x - 1
            rem -= 1
        return (w << 6) + _lowest_bit(x)


cdef inline Py_ssize_t _lowest_bit(uint64_t x) nogil:
    return ctz64(x)


cdef class WmView:
    """Wavelet matrix over a code sequence: per-level bit vectors."""

    cdef list levels
    cdef int64_t[::1] zeros
    cdef int64_t[:, ::1] zpath
    cdef readonly Py_ssize_t sigma
    cdef readonly Py_ssize_t length
    cdef readonly Py_ssize_t depth

    def __init__(self, levels, zeros, zpath, sigma, length):
        self.levels = list(levels)
        self.zeros = np.ascontiguousarray(zeros, dtype=np.int64)
        self.zpath = np.ascontiguousarray(zpath, dtype=np.int64)
        self.sigma = sigma
        self.length = length
        self.depth = len(self.levels)

    cpdef Py_ssize_t rank(self, Py_ssize_t a, Py_ssize_t i):
        cdef Py_ssize_t d, pos, lev, ones
        cdef BitView bv
        if i <= 0:
            return 0
        if i > self.length:
            i = self.length
        d = self.depth
        pos = i
        for lev in range(d):
            bv = <BitView>self.levels[lev]
            ones = bv.rank1(pos)
            if (a >> (d - 1 - lev)) & 1:
                pos = <Py_ssize_t>self.zeros[lev] + ones
            else:
                pos = pos - ones
        return pos - <Py_ssize_t>self.zpath[a, d]

    cpdef Py_ssize_t access(self, Py_ssize_t p):
        cdef Py_ssize_t code = 0, d = self.depth, lev, ones
        cdef BitView bv
        for lev in range(d):
            bv = <BitView>self.levels[lev]
            ones = bv.rank1(p)
            if bv.get(p):
                code = (code << 1) | 1
                p = <Py_ssize_t>self.zeros[lev] + ones
            else:
                code = code << 1
                p = p - ones
        return code

    cpdef tuple access_rank(self, Py_ssize_t p):
        cdef Py_ssize_t code = 0, d = self.depth, pos = p, lev, ones
        cdef BitView bv
        for lev in range(d):
            bv = <BitView>self.levels[lev]
            ones = bv.rank1(pos)
            if bv.get(pos):
                code = (code << 1) | 1
                pos = <Py_ssize_t>self.zeros[lev] + ones
            else:
                code = code << 1
                pos = pos - ones
        return code, pos - <Py_ssize_t>self.zpath[code, d]

    cpdef decode(self, Py_ssize_t lo, Py_ssize_t hi, uint8_t[::1] out):
        cdef Py_ssize_t p
        for p in range(lo, hi):
            out[p - lo] = <uint8_t>self.access(p)


cdef class FmView:
    """Backward-search core: wavelet-coded last column plus cumulative counts."""

    cdef readonly WmView wm
    cdef int64_t[::1] counts
    cdef readonly Py_ssize_t n

    def __init__(self, WmView wm, counts):
        self.wm = wm
        self.counts = np.ascontiguousarray(counts, dtype=np.int64)
        self.n = wm.length

    cpdef tuple extend(self, Py_ssize_t s, Py_ssize_t e, Py_ssize_t a):
        cdef Py_ssize_t c = <Py_ssize_t>self.counts[a]
        return c + self.wm.rank(a, s), c + self.wm.rank(a, e)

    cpdef tuple find(self, const uint8_t[:] pat):
        cdef Py_ssize_t s = 0, e = self.n, k, a, c
        for k in range(pat.shape[0] - 1, -1, -1):
            a = pat[k]
            c = <Py_ssize_t>self.counts[a]
            s = c + self.wm.rank(a, s)
            e = c + self.wm.rank(a, e)
            if s >= e:
                return 0, 0
        return s, e

    cpdef Py_ssize_t lf(self, Py_ssize_t p):
        cdef Py_ssize_t code, r
        code, r = self.wm.access_rank(p)
        return <Py_ssize_t>self.counts[code] + r

    cpdef tuple access_lf(self, Py_ssize_t p):
        cdef Py_ssize_t code, r
        code, r = self.wm.access_rank(p)
        return code, <Py_ssize_t>self.counts[code] + r

    cpdef list locate_range(self, Py_ssize_t s, Py_ssize_t e, BitView marks,
                            uint64_t[::1] sa_vals, Py_ssize_t cap):
        cdef list out = []
        cdef Py_ssize_t row, cur, t
        for row in range(s, e):
            cur = row
            t = 0
            while not marks.get(cur):
                cur = self.lf(cur)
                t += 1
                if t > cap:
                    raise RuntimeError("sample walk exceeded cap")
            out.append(<Py_ssize_t>sa_vals[marks.rank1(cur + 1) - 1] + t)
        return out

    cpdef extract_codes(self, Py_ssize_t start_row, Py_ssize_t count, uint8_t[::1] out):
        cdef Py_ssize_t cur = start_row, k, code
        for k in range(count - 1, -1, -1):
            code, cur = self.wm.access_rank(cur)
            out[k] = <uint8_t>code
            cur = <Py_ssize_t>self.counts[code] + cur


cdef class RelView:
    """Rank structure for a sequence stored as differences from a reference."""

    cdef readonly FmView ref
    cdef readonly BitView rmask
    cdef readonly BitView tmask
    cdef readonly WmView ronly
    cdef readonly WmView tonly
    cdef int64_t[::1] dsyms
    cdef int64_t[::1] dvals
    cdef readonly Py_ssize_t n

    def __init__(self, FmView ref, BitView rmask, BitView tmask, WmView ronly,
                 WmView tonly, dsyms, dvals):
        self.ref = ref
        self.rmask = rmask
        self.tmask = tmask
        self.ronly = ronly
        self.tonly = tonly
        self.dsyms = np.ascontiguousarray(dsyms, dtype=np.int64)
        self.dvals = np.ascontiguousarray(dvals, dtype=np.int64)
        self.n = tmask.nbits

    cpdef Py_ssize_t rank(self, Py_ssize_t a, Py_ssize_t i):
        cdef Py_ssize_t z, r, k, ones
        if i <= 0:
            return 0
        if i > self.n:
            i = self.n
        z = i - self.tmask.rank1(i)
        r = 0
        if z > 0:
            k = self.rmask.select0(z) + 1
            r = self.ref.wm.rank(a, k) - self.ronly.rank(a, self.rmask.rank1(k))
        ones = self.tmask.rank1(i)
        if ones > 0:
            r += self.tonly.rank(a, ones)
        return r

    cpdef Py_ssize_t cum(self, Py_ssize_t a):
        cdef Py_ssize_t lo = 0, hi = self.dsyms.shape[0], mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.dsyms[mid] < a:
                lo = mid + 1
            else:
                hi = mid
        if lo < self.dsyms.shape[0] and self.dsyms[lo] == a:
            return <Py_ssize_t>self.dvals[lo]
        return <Py_ssize_t>self.ref.counts[a]

    cpdef tuple extend(self, Py_ssize_t s, Py_ssize_t e, Py_ssize_t a):
        cdef Py_ssize_t c = self.cum(a)
        return c + self.rank(a, s), c + self.rank(a, e)

    cpdef tuple find(self, const uint8_t[:] pat):
        cdef Py_ssize_t s = 0, e = self.n, k, a, c
        for k in range(pat.shape[0] - 1, -1, -1):
            a = pat[k]
            c = self.cum(a)
            s = c + self.rank(a, s)
            e = c + self.rank(a, e)
            if s >= e:
                return 0, 0
        return s, e

    cpdef Py_ssize_t access(self, Py_ssize_t p):
        cdef Py_ssize_t z
        if self.tmask.get(p):
            return self.tonly.access(self.tmask.rank1(p))
        z = self.tmask.rank0(p + 1)
        return self.ref.wm.access(self.rmask.select0(z))

    cpdef tuple access_lf(self, Py_ssize_t p):
        cdef Py_ssize_t a = self.access(p)
        return a, self.cum(a) + self.rank(a, p)


cdef class RelLocView:
    """Position reporting on top of a relative rank structure."""

    cdef readonly RelView rel
    cdef readonly BitView marks
    cdef uint64_t[::1] sa_vals
    cdef readonly BitView m1
    cdef readonly BitView m2
    cdef int64_t[::1] esc_rows
    cdef int64_t[::1] esc_pos
    cdef readonly Py_ssize_t n1len

    def __init__(self, RelView rel, BitView marks, sa_vals, BitView m1,
                 BitView m2, esc_rows, esc_pos, n1len):
        self.rel = rel
        self.marks = marks
        self.sa_vals = np.ascontiguousarray(sa_vals, dtype=np.uint64)
        self.m1 = m1
        self.m2 = m2
        self.esc_rows = np.ascontiguousarray(esc_rows, dtype=np.int64)
        self.esc_pos = np.ascontiguousarray(esc_pos, dtype=np.int64)
        self.n1len = n1len

    cdef Py_ssize_t _stop_position(self, Py_ssize_t cur):
        cdef Py_ssize_t z, k0, sa1, c1, m
        cdef RelView rel = self.rel
        if rel.tmask.get(cur):
            return 0
        z = rel.tmask.rank0(cur + 1)
        k0 = rel.rmask.select0(z)
        if not self.marks.get(k0):
            return 0
        sa1 = <Py_ssize_t>self.sa_vals[self.marks.rank1(k0 + 1) - 1]
        c1 = self.n1len if sa1 == 1 else sa1 - 1
        m = self.m1.rank0(c1)
        if m < 1:
            return 0
        return self.m2.select0(m) + 1

    cpdef Py_ssize_t locate_row(self, Py_ssize_t row):
        cdef RelView rel = self.rel
        cdef Py_ssize_t n = rel.n, cur = row, t = 0, c2, lo, hi, mid, a
        while t <= n:
            c2 = self._stop_position(cur)
            if c2:
                return (c2 + t) % n + 1
            lo = 0
            hi = self.esc_rows.shape[0]
            while lo < hi:
                mid = (lo + hi) >> 1
                if self.esc_rows[mid] < cur:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < self.esc_rows.shape[0] and self.esc_rows[lo] == cur:
                return (<Py_ssize_t>self.esc_pos[lo] + t) % n + 1
            a = rel.access(cur)
            cur = rel.cum(a) + rel.rank(a, cur)
            t += 1
        raise RuntimeError("locate walk exceeded cycle length")

    cpdef list locate_range(self, Py_ssize_t s, Py_ssize_t e):
        cdef list out = []
        cdef Py_ssize_t r
        for r in range(s, e):
            out.append(self.locate_row(r))
        return out


def middle_snake(const uint8_t[:] x, const uint8_t[:] y, Py_ssize_t max_d,
                 int64_t[::1] vf, int64_t[::1] vb):
    """Middle snake of an optimal insert/delete script between `x` and `y`.

    Returns (d, xs, ys, xe, ye) or None once the script provably needs more
    than `max_d` edits; see the pure version for the coordinate conventions.
    """
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0]
    cdef Py_ssize_t delta = n - m
    cdef bint odd = delta & 1
    cdef Py_ssize_t dmax = (n + m + 1) // 2
    cdef Py_ssize_t off = dmax + 1
    cdef Py_ssize_t d, k, px, py, sx, sy, kr, ko
    vf[off + 1] = 0
    vb[off + 1] = 0
    for d in range(dmax + 1):
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vf[off + k - 1] < vf[off + k + 1]):
                px = <Py_ssize_t>vf[off + k + 1]
            else:
                px = <Py_ssize_t>vf[off + k - 1] + 1
            py = px - k
            sx = px
            sy = py
            while px < n and py < m and x[px] == y[py]:
                px += 1
                py += 1
            vf[off + k] = px
            if odd:
                kr = delta - k
                if -(d - 1) <= kr <= d - 1 and px >= n - <Py_ssize_t>vb[off + kr]:
                    return 2 * d - 1, sx, sy, px, py
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vb[off + k - 1] < vb[off + k + 1]):
                px = <Py_ssize_t>vb[off + k + 1]
            else:
                px = <Py_ssize_t>vb[off + k - 1] + 1
            py = px - k
            sx = px
            sy = py
            while px < n and py < m and x[n - 1 - px] == y[m - 1 - py]:
                px += 1
                py += 1
            vb[off + k] = px
            if not odd:
                ko = delta - k
                if -d <= ko <= d and <Py_ssize_t>vf[off + ko] >= n - px:
                    return 2 * d, n - px, m - py, n - sx, m - sy
        if 2 * d + 1 > max_d:
            return None
    return None
