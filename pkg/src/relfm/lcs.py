"""Common-subsequence machinery: exact DP, greedy bisection, partitioned runs.

All sequence arguments are byte strings or uint8 code arrays; alignments
report 1-based positions into the sequences they were computed from.
"""

import numpy as np

from relfm import core

EXACT_CELL_LIMIT = 100_000_000


def _as_codes(x):
    if isinstance(x, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(x), dtype=np.uint8)
    return np.ascontiguousarray(x, dtype=np.uint8)


class Alignment:
    """Strictly increasing 1-based position pairs certifying a common subsequence."""

    __slots__ = ("x_pos", "y_pos")

    def __init__(self, x_pos, y_pos):
        x = np.ascontiguousarray(x_pos, dtype=np.int64)
        y = np.ascontiguousarray(y_pos, dtype=np.int64)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("position arrays must be equal-length vectors")
        self.x_pos = x
        self.y_pos = y

    def __len__(self):
        return int(self.x_pos.size)

    def __repr__(self):
        return f"Alignment(length={len(self)})"

    def validate(self, x, y):
        """True when the pairs really form a common subsequence of x and y."""
        xs = _as_codes(x)
        ys = _as_codes(y)
        p = self.x_pos
        q = self.y_pos
        if p.size == 0:
            return True
        if p[0] < 1 or q[0] < 1 or p[-1] > xs.size or q[-1] > ys.size:
            return False
        if np.any(np.diff(p) <= 0) or np.any(np.diff(q) <= 0):
            return False
        return bool(np.array_equal(xs[p - 1], ys[q - 1]))


def exact_lcs(x, y):
    """Optimal common subsequence by dynamic programming (quadratic)."""
    xs = _as_codes(x)
    ys = _as_codes(y)
    n, m = xs.size, ys.size
    if n * m > EXACT_CELL_LIMIT:
        raise ValueError("input too large for exact LCS")
    table = np.zeros((n + 1, m + 1), dtype=np.uint16)
    for i in range(1, n + 1):
        prev = table[i - 1]
        base = prev[1:].copy()
        np.maximum(base, prev[:-1] + (ys == xs[i - 1]), out=base)
        np.maximum.accumulate(base, out=table[i, 1:])
    # Walk back, skipping x positions first at ties.
    i, j = n, m
    px, py = [], []
    while i > 0 and j > 0:
        here = table[i, j]
        if table[i - 1, j] == here:
            i -= 1
        elif table[i, j - 1] == here:
            j -= 1
        else:
            px.append(i)
            py.append(j)
            i -= 1
            j -= 1
    return Alignment(px[::-1], py[::-1])


def common_run(x, y):
    """All shared occurrences of the single best symbol (first at ties)."""
    xs = _as_codes(x)
    ys = _as_codes(y)
    if xs.size == 0 or ys.size == 0:
        return Alignment([], [])
    width = max(int(xs.max()), int(ys.max())) + 1
    cx = np.bincount(xs, minlength=width)
    cy = np.bincount(ys, minlength=width)
    a = int(np.argmax(np.minimum(cx, cy)))
    c = int(min(cx[a], cy[a]))
    return Alignment(
        np.flatnonzero(xs == a)[:c] + 1, np.flatnonzero(ys == a)[:c] + 1
    )


def _trim_ends(xs, ys, xo, xe, yo, ye, runs, post):
    """Strip shared prefix/suffix of the block, recording them as match runs."""
    m = min(xe - xo, ye - yo)
    if m:
        neq = np.flatnonzero(xs[xo : xo + m] != ys[yo : yo + m])
        k = int(neq[0]) if neq.size else m
        if k:
            runs.append((xo, yo, k))
            xo += k
            yo += k
    m = min(xe - xo, ye - yo)
    if m:
        neq = np.flatnonzero(xs[xe - m : xe][::-1] != ys[ye - m : ye][::-1])
        k = int(neq[0]) if neq.size else m
        if k:
            post.append((xe - k, ye - k, k))
            xe -= k
            ye -= k
    return xo, xe, yo, ye


def _bisect_block(xs, ys, xo, xe, yo, ye, max_d, vf, vb, runs):
    """Divide-and-conquer on the middle snake; False when max_d is exceeded."""
    post = []
    xo, xe, yo, ye = _trim_ends(xs, ys, xo, xe, yo, ye, runs, post)
    if xo < xe and yo < ye:
        res = core.kernel.middle_snake(xs[xo:xe], ys[yo:ye], max_d, vf, vb)
        if res is None:
            return False
        _, sx, sy, ex, ey = res
        if not _bisect_block(xs, ys, xo, xo + sx, yo, yo + sy, max_d, vf, vb, runs):
            return False
        if ex > sx:
            runs.append((xo + sx, yo + sy, ex - sx))
        if not _bisect_block(xs, ys, xo + ex, xe, yo + ey, ye, max_d, vf, vb, runs):
            return False
    runs.extend(post)
    return True


def _runs_to_alignment(runs):
    total = sum(r[2] for r in runs)
    px = np.zeros(total, dtype=np.int64)
    py = np.zeros(total, dtype=np.int64)
    at = 0
    for xo, yo, k in runs:
        seq = np.arange(1, k + 1, dtype=np.int64)
        px[at : at + k] = xo + seq
        py[at : at + k] = yo + seq
        at += k
    return Alignment(px, py)


def greedy_lcs(x, y, max_diag=50000):
    """Optimal common subsequence while the edit distance stays within
    max_diag; degrades to the best single-symbol run beyond that."""
    xs = _as_codes(x)
    ys = _as_codes(y)
    scratch = xs.size + ys.size + 5
    vf = np.zeros(scratch, dtype=np.int64)
    vb = np.zeros(scratch, dtype=np.int64)
    runs = []
    if _bisect_block(xs, ys, 0, xs.size, 0, ys.size, max_diag, vf, vb, runs):
        return _runs_to_alignment(runs)
    return common_run(xs, ys)


class PartitionSpec:
    """Knobs for partitioned alignment of two BWTs."""

    __slots__ = ("max_block", "max_depth", "max_diag", "hard_gap")

    def __init__(self, max_block=1024, max_depth=32, max_diag=50000, hard_gap=50000):
        self.max_block = int(max_block)
        self.max_depth = int(max_depth)
        self.max_diag = int(max_diag)
        self.hard_gap = int(hard_gap)


def partitioned_bwt_lcs(ix1, ix2, part=None):
    """Long common subsequence of BWT(ix1 text) and BWT(ix2 text), found by
    blockwise alignment of row ranges that share a suffix prefix."""
    if part is None:
        part = PartitionSpec()
    if ix1.alphabet != ix2.alphabet:
        raise ValueError("alphabet mismatch")
    sigma = ix1.sigma
    catch = ix1.alphabet.catchall
    bwt1 = ix1.bwt.decode(0, ix1.rows)
    bwt2 = ix2.bwt.decode(0, ix2.rows)
    x_parts = []
    y_parts = []
    # Depth-first over the pattern trie; children pushed high-to-low so row
    # ranges come off the stack in ascending order.
    stack = [((), 0, ix1.rows, 0, ix2.rows)]
    while stack:
        pattern, s1, e1, s2, e2 = stack.pop()
        len1 = e1 - s1
        len2 = e2 - s2
        if len1 == 0 and len2 == 0:
            continue
        depth = len(pattern)
        if len1 > part.max_block and len2 > part.max_block and depth < part.max_depth:
            for a in range(sigma - 1, -1, -1):
                child = pattern + (a,)
                codes = np.array(child, dtype=np.uint8)
                c1 = ix1._view.find(codes)
                c2 = ix2._view.find(codes)
                stack.append((child, c1[0], c1[1], c2[0], c2[1]))
            continue
        if len1 == 0 or len2 == 0:
            continue
        xs = bwt1[s1:e1]
        ys = bwt2[s2:e2]
        degenerate = abs(len1 - len2) > part.hard_gap or (
            catch is not None
            and depth == part.max_depth
            and all(c == catch for c in pattern)
        )
        if degenerate:
            al = common_run(xs, ys)
        else:
            al = greedy_lcs(xs, ys, part.max_diag)
        if len(al):
            x_parts.append(al.x_pos + s1)
            y_parts.append(al.y_pos + s2)
    if not x_parts:
        return Alignment([], [])
    return Alignment(np.concatenate(x_parts), np.concatenate(y_parts))


def bw_distance(n1, n2, alignment):
    """Rows of both BWTs left unpaired by the alignment."""
    ell = len(alignment)
    if ell > min(n1, n2) + 1:
        raise ValueError("invalid alignment")
    return (n1 + 1) + (n2 + 1) - 2 * ell
