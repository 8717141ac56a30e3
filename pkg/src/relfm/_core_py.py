"""Pure-Python query kernels.

Mirror of the compiled module ``relfm._core_c``: identical structures
(the same packed words and rank directories), only the inner loops differ.
Scalar state is kept as Python ints so the hot paths avoid numpy overhead.
"""

BACKEND = "py"

_MASK64 = (1 << 64) - 1


class BitView:
    """Read-only bit vector with O(1) rank and binary-search select.

    `words` packs bits little-endian within 64-bit words.  `supers` holds
    absolute one-counts before each 65536-bit superblock, `blocks` holds
    counts relative to the superblock before each 512-bit block.
    """

    __slots__ = ("words", "supers", "blocks", "nbits", "ones")

    def __init__(self, words, supers, blocks, nbits, ones):
        self.words = [int(w) for w in words]
        self.supers = [int(s) for s in supers]
        self.blocks = [int(b) for b in blocks]
        self.nbits = int(nbits)
        self.ones = int(ones)

    def get(self, p):
        return (self.words[p >> 6] >> (p & 63)) & 1

    def rank1(self, i):
        if i <= 0:
            return 0
        if i > self.nbits:
            i = self.nbits
        cnt = self.supers[i >> 16] + self.blocks[i >> 9]
        w = (i >> 9) << 3
        wend = i >> 6
        words = self.words
        while w < wend:
            cnt += bin(words[w]).count("1")
            w += 1
        rem = i & 63
        if rem:
            cnt += bin(words[wend] & ((1 << rem) - 1)).count("1")
        return cnt

    def rank0(self, i):
        if i <= 0:
            return 0
        if i > self.nbits:
            i = self.nbits
        return i - self.rank1(i)

    def select1(self, j):
        """0-based position of the j-th (1-based) set bit."""
        if j < 1 or j > self.ones:
            raise ValueError(f"select1({j}) out of range (ones={self.ones})")
        supers, blocks, words = self.supers, self.blocks, self.words
        lo, hi = 0, len(supers) - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if supers[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - supers[lo]
        b_lo = lo << 7
        b_hi = min(len(blocks) - 1, b_lo + 127)
        while b_lo < b_hi:
            mid = (b_lo + b_hi + 1) >> 1
            if blocks[mid] < rem:
                b_lo = mid
            else:
                b_hi = mid - 1
        rem -= blocks[b_lo]
        w = b_lo << 3
        while True:
            c = bin(words[w]).count("1")
            if rem <= c:
                break
            rem -= c
            w += 1
        x = words[w]
        while rem > 1:
            x &= x - 1
            rem -= 1
        return (w << 6) + ((x & -x).bit_length() - 1)

    def select0(self, j):
        """0-based position of the j-th (1-based) zero bit."""
        zeros = self.nbits - self.ones
        if j < 1 or j > zeros:
            raise ValueError(f"select0({j}) out of range (zeros={zeros})")
        supers, blocks, words = self.supers, self.blocks, self.words
        lo, hi = 0, len(supers) - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (mid << 16) - supers[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - ((lo << 16) - supers[lo])
        b_lo = lo << 7
        b_hi = min(len(blocks) - 1, b_lo + 127)
        base = b_lo
        while b_lo < b_hi:
            mid = (b_lo + b_hi + 1) >> 1
            if ((mid - base) << 9) - blocks[mid] < rem:
                b_lo = mid
            else:
                b_hi = mid - 1
        rem -= ((b_lo - base) << 9) - blocks[b_lo]
        w = b_lo << 3
        while True:
            c = 64 - bin(words[w]).count("1")
            if rem <= c:
                break
            rem -= c
            w += 1
        x = words[w] ^ _MASK64
        while rem > 1:
            x &= x - 1
            rem -= 1
        return (w << 6) + ((x & -x).bit_length() - 1)


class WmView:
    """Wavelet matrix over a code sequence: per-level bit vectors.

    Level bits are the symbol code's bits from most significant down;
    after each level, zeros are stably routed left and ones right.
    `zpath[a]` caches the descent of prefix length 0 along code `a`,
    so rank is a plain descent minus that cached origin.
    """

    __slots__ = ("levels", "zeros", "zpath", "sigma", "length", "depth")

    def __init__(self, levels, zeros, zpath, sigma, length):
        self.levels = list(levels)
        self.zeros = [int(z) for z in zeros]
        self.zpath = [[int(v) for v in row] for row in zpath]
        self.sigma = int(sigma)
        self.length = int(length)
        self.depth = len(self.levels)

    def rank(self, a, i):
        """Occurrences of code `a` among the first `i` positions."""
        if i <= 0:
            return 0
        if i > self.length:
            i = self.length
        d = self.depth
        pos = i
        for lev in range(d):
            bv = self.levels[lev]
            ones = bv.rank1(pos)
            if (a >> (d - 1 - lev)) & 1:
                pos = self.zeros[lev] + ones
            else:
                pos = pos - ones
        return pos - self.zpath[a][d]

    def access(self, p):
        """Code at 0-based position `p`."""
        code = 0
        d = self.depth
        for lev in range(d):
            bv = self.levels[lev]
            ones = bv.rank1(p)
            if bv.get(p):
                code = (code << 1) | 1
                p = self.zeros[lev] + ones
            else:
                code = code << 1
                p = p - ones
        return code

    def access_rank(self, p):
        """(code at `p`, occurrences of that code strictly before `p`)."""
        code = 0
        d = self.depth
        pos = p
        for lev in range(d):
            bv = self.levels[lev]
            ones = bv.rank1(pos)
            if bv.get(pos):
                code = (code << 1) | 1
                pos = self.zeros[lev] + ones
            else:
                code = code << 1
                pos = pos - ones
        return code, pos - self.zpath[code][d]

    def decode(self, lo, hi, out):
        """Write codes at positions [lo, hi) into `out` (uint8 buffer)."""
        for p in range(lo, hi):
            out[p - lo] = self.access(p)


class FmView:
    """Backward-search core: wavelet-coded last column plus cumulative counts."""

    __slots__ = ("wm", "counts", "n")

    def __init__(self, wm, counts):
        self.wm = wm
        self.counts = [int(c) for c in counts]
        self.n = wm.length

    def extend(self, s, e, a):
        """Narrow the half-open row range [s, e) by prepending code `a`."""
        c = self.counts[a]
        return c + self.wm.rank(a, s), c + self.wm.rank(a, e)

    def find(self, pat):
        """Row range of `pat` (iterable of codes), scanned right to left."""
        s, e = 0, self.n
        for a in reversed(pat):
            c = self.counts[a]
            s = c + self.wm.rank(a, s)
            e = c + self.wm.rank(a, e)
            if s >= e:
                return 0, 0
        return s, e

    def lf(self, p):
        code, r = self.wm.access_rank(p)
        return self.counts[code] + r

    def access_lf(self, p):
        code, r = self.wm.access_rank(p)
        return code, self.counts[code] + r

    def locate_range(self, s, e, marks, sa_vals, cap):
        """Suffix-array values for rows [s, e) by walking to marked rows.

        `marks` flags sampled rows; `sa_vals[k]` is the value at the row
        holding the k-th set mark (0-based k).  Walking one LF step lands
        on the value minus one, so the answer is the sample plus steps.
        """
        out = []
        for row in range(s, e):
            cur = row
            t = 0
            while not marks.get(cur):
                cur = self.lf(cur)
                t += 1
                if t > cap:
                    raise RuntimeError("sample walk exceeded cap")
            out.append(int(sa_vals[marks.rank1(cur + 1) - 1]) + t)
        return out

    def extract_codes(self, start_row, count, out):
        """Fill `out[:count]` with codes read backwards from `start_row`.

        Walking LF from the row of text position p+count yields the codes
        at p+count-1, ..., p, so `out` is filled from the end.
        """
        cur = start_row
        for k in range(count - 1, -1, -1):
            code, cur = self.access_lf(cur)
            out[k] = code


class RelView:
    """Rank structure for a sequence stored as differences from a reference.

    `rmask`/`tmask` flag the positions each side keeps out of the common
    subsequence; `ronly`/`tonly` are wavelet matrices over those leftover
    characters.  A target rank decomposes into reference rank at the
    aligned prefix, minus reference-only noise, plus target-only hits.
    """

    __slots__ = ("ref", "rmask", "tmask", "ronly", "tonly", "dsyms", "dvals", "n")

    def __init__(self, ref, rmask, tmask, ronly, tonly, dsyms, dvals):
        self.ref = ref
        self.rmask = rmask
        self.tmask = tmask
        self.ronly = ronly
        self.tonly = tonly
        self.dsyms = [int(s) for s in dsyms]
        self.dvals = [int(v) for v in dvals]
        self.n = tmask.nbits

    def rank(self, a, i):
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

    def cum(self, a):
        """Count of target symbols smaller than `a`: the stored override for
        symbols whose cumulative count drifted, the reference value otherwise."""
        dsyms = self.dsyms
        lo, hi = 0, len(dsyms)
        while lo < hi:
            mid = (lo + hi) >> 1
            if dsyms[mid] < a:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(dsyms) and dsyms[lo] == a:
            return self.dvals[lo]
        return self.ref.counts[a]

    def extend(self, s, e, a):
        c = self.cum(a)
        return c + self.rank(a, s), c + self.rank(a, e)

    def find(self, pat):
        s, e = 0, self.n
        for a in reversed(pat):
            c = self.cum(a)
            s = c + self.rank(a, s)
            e = c + self.rank(a, e)
            if s >= e:
                return 0, 0
        return s, e

    def access(self, p):
        if self.tmask.get(p):
            return self.tonly.access(self.tmask.rank1(p))
        z = self.tmask.rank0(p + 1)
        return self.ref.wm.access(self.rmask.select0(z))

    def access_lf(self, p):
        a = self.access(p)
        return a, self.cum(a) + self.rank(a, p)


class RelLocView:
    """Position reporting on top of a relative rank structure.

    Rows are walked with relative-only steps; the walk stops either at a
    target row aligned to a sampled reference row (the sample's position
    is carried across the alignment masks) or at an explicit escape row.
    """

    __slots__ = (
        "rel",
        "marks",
        "sa_vals",
        "m1",
        "m2",
        "esc_rows",
        "esc_pos",
        "n1len",
    )

    def __init__(self, rel, marks, sa_vals, m1, m2, esc_rows, esc_pos, n1len):
        self.rel = rel
        self.marks = marks
        self.sa_vals = sa_vals
        self.m1 = m1
        self.m2 = m2
        self.esc_rows = [int(r) for r in esc_rows]
        self.esc_pos = [int(p) for p in esc_pos]
        self.n1len = int(n1len)

    def _stop_position(self, cur):
        """If `cur` maps to a usable sampled reference row, its 1-based
        target character position; otherwise 0."""
        rel = self.rel
        if rel.tmask.get(cur):
            return 0
        z = rel.tmask.rank0(cur + 1)
        k0 = rel.rmask.select0(z)
        if not self.marks.get(k0):
            return 0
        sa1 = int(self.sa_vals[self.marks.rank1(k0 + 1) - 1])
        c1 = self.n1len if sa1 == 1 else sa1 - 1
        m = self.m1.rank0(c1)
        if m < 1:
            return 0
        return self.m2.select0(m) + 1

    def locate_row(self, row):
        rel = self.rel
        n = rel.n
        esc_rows = self.esc_rows
        cur = row
        t = 0
        while t <= n:
            c2 = self._stop_position(cur)
            if c2:
                return (c2 + t) % n + 1
            lo, hi = 0, len(esc_rows)
            while lo < hi:
                mid = (lo + hi) >> 1
                if esc_rows[mid] < cur:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < len(esc_rows) and esc_rows[lo] == cur:
                return (self.esc_pos[lo] + t) % n + 1
            a, cur = rel.access_lf(cur)
            t += 1
        raise RuntimeError("locate walk exceeded cycle length")

    def locate_range(self, s, e):
        return [self.locate_row(r) for r in range(s, e)]


def middle_snake(x, y, max_d, vf, vb):
    """Middle snake of an optimal insert/delete script between `x` and `y`.

    Returns (d, xs, ys, xe, ye): the script length and the snake's
    endpoints, or None once the script provably needs more than `max_d`
    edits.  `vf`/`vb` are scratch arrays of length >= len(x)+len(y)+5.
    The reverse search runs the forward stepper on reversed coordinates.
    """
    n, m = len(x), len(y)
    delta = n - m
    odd = delta & 1
    dmax = (n + m + 1) // 2
    off = dmax + 1
    vf[off + 1] = 0
    vb[off + 1] = 0
    for d in range(dmax + 1):
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vf[off + k - 1] < vf[off + k + 1]):
                px = vf[off + k + 1]
            else:
                px = vf[off + k - 1] + 1
            py = px - k
            sx, sy = px, py
            while px < n and py < m and x[px] == y[py]:
                px += 1
                py += 1
            vf[off + k] = px
            if odd:
                kr = delta - k
                if -(d - 1) <= kr <= d - 1 and px >= n - vb[off + kr]:
                    return 2 * d - 1, sx, sy, px, py
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vb[off + k - 1] < vb[off + k + 1]):
                px = vb[off + k + 1]
            else:
                px = vb[off + k - 1] + 1
            py = px - k
            sx, sy = px, py
            while px < n and py < m and x[n - 1 - px] == y[m - 1 - py]:
                px += 1
                py += 1
            vb[off + k] = px
            if not odd:
                ko = delta - k
                if -d <= ko <= d and vf[off + ko] >= n - px:
                    return 2 * d, n - px, m - py, n - sx, m - sy
        if 2 * d + 1 > max_d:
            return None
    return None
