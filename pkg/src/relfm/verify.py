"""Slow reference implementations used to cross-check the fast structures.

Everything here favours obviousness over speed: full sorts, direct scans,
memoised recursions, exhaustive enumeration.  The test suite freezes values
produced by these functions, and ``rfmx verify`` replays a subset of them
against the fast paths on real input.
"""

from functools import lru_cache
from itertools import product

import numpy as np


def naive_suffix_array(codes):
    """Sort all suffixes of `codes` by direct tuple comparison.

    Returns 0-based starting positions.  `codes` must already carry its
    terminator, so all suffixes are distinct.
    """
    seq = [int(c) for c in codes]
    return sorted(range(len(seq)), key=lambda i: seq[i:])


def naive_bwt(codes, sa=None):
    """Last column of the sorted rotations: the character preceding each suffix."""
    if sa is None:
        sa = naive_suffix_array(codes)
    n = len(codes)
    return [int(codes[(p - 1) % n]) for p in sa]


def naive_rank(seq, a, i):
    """Occurrences of symbol `a` among the first `i` entries of `seq`."""
    return sum(1 for c in seq[:i] if int(c) == a)


def naive_select(seq, a, j):
    """0-based position of the j-th (1-based) occurrence of `a` in `seq`."""
    seen = 0
    for pos, c in enumerate(seq):
        if int(c) == a:
            seen += 1
            if seen == j:
                return pos
    raise ValueError(f"fewer than {j} occurrences of {a}")


def naive_occurrences(codes, pattern):
    """All 1-based start positions of `pattern` in `codes` by window scan."""
    seq = [int(c) for c in codes]
    pat = [int(c) for c in pattern]
    m = len(pat)
    if m == 0:
        return []
    return [i + 1 for i in range(len(seq) - m + 1) if seq[i : i + m] == pat]


def lcs_length_memo(x, y):
    """Longest common subsequence length by memoised recursion.

    Independent of the vectorised table code; intended for short inputs.
    """
    xs = tuple(int(c) for c in x)
    ys = tuple(int(c) for c in y)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == 0 or j == 0:
            return 0
        if xs[i - 1] == ys[j - 1]:
            return go(i - 1, j - 1) + 1
        return max(go(i - 1, j), go(i, j - 1))

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(xs) * len(ys) + 100))
    try:
        return go(len(xs), len(ys))
    finally:
        sys.setrecursionlimit(old)


def check_alignment(x, y, pairs):
    """Validate a common-subsequence alignment between `x` and `y`.

    `pairs` holds (i, j) index pairs, 0-based.  Checks strict monotonicity
    in both coordinates and that matched symbols agree.
    """
    prev_i, prev_j = -1, -1
    for i, j in pairs:
        if not (prev_i < i and prev_j < j):
            return False
        if int(x[i]) != int(y[j]):
            return False
        prev_i, prev_j = i, j
    return True


def brute_two_choice_lis(pairs):
    """Exhaustive two-choice increasing-subsequence maximum.

    Each item offers two values; per item pick the first, the second, or
    nothing, keeping picked values strictly increasing left to right.
    3**n enumeration, so keep n small.
    """
    best = 0
    for choice in product(range(3), repeat=len(pairs)):
        prev = None
        count = 0
        ok = True
        for (a, b), c in zip(pairs, choice):
            if c == 0:
                continue
            v = a if c == 1 else b
            if v is None or (prev is not None and v <= prev):
                ok = False
                break
            prev = v
            count += 1
        if ok and count > best:
            best = count
    return best


def naive_count_matrix(codes, sigma):
    """Cumulative symbol counts: entry a = occurrences of symbols < a."""
    freq = [0] * sigma
    for c in codes:
        freq[int(c)] += 1
    out = [0] * sigma
    run = 0
    for a in range(sigma):
        out[a] = run
        run += freq[a]
    return out


def random_dna(rng, n, alphabet=b"ACGT"):
    """Uniform random text over `alphabet` as bytes."""
    idx = rng.integers(0, len(alphabet), size=n)
    return bytes(np.frombuffer(bytes(alphabet), dtype=np.uint8)[idx])


def mutate(rng, text, rate, alphabet=b"ACGT", indel_fraction=0.1):
    """Apply point mutations and occasional single-character indels.

    `rate` is the per-position event probability; of the events,
    `indel_fraction` are splits evenly into insertions and deletions,
    the rest substitutions.  Returns bytes.
    """
    out = bytearray()
    choices = bytes(alphabet)
    for ch in text:
        r = rng.random()
        if r >= rate:
            out.append(ch)
            continue
        kind = rng.random()
        if kind < indel_fraction / 2:
            continue  # deletion
        if kind < indel_fraction:
            out.append(choices[rng.integers(0, len(choices))])
            out.append(ch)
            continue
        repl = choices[rng.integers(0, len(choices))]
        while repl == ch:
            repl = choices[rng.integers(0, len(choices))]
        out.append(repl)
    return bytes(out)


def marker_subsequence_exists(p1, p2):
    """Brute force: can all 'A' markers of the second reduction string be
    matched to 'A' markers of the first so the pairing is order-invariant
    across both BWTs?"""
    from itertools import combinations

    from relfm.invariant import check_bwt_invariant, reduction_strings
    from relfm.lcs import Alignment
    from relfm.text import Alphabet, Text

    s1, s2 = reduction_strings(p1, p2)
    alphabet = Alphabet(b"ABC")
    t1 = Text.from_bytes(s1, alphabet=alphabet)
    t2 = Text.from_bytes(s2, alphabet=alphabet)
    a1 = [i + 1 for i in range(len(s1)) if s1[i : i + 1] == b"A"]
    a2 = [j + 1 for j in range(len(s2)) if s2[j : j + 1] == b"A"]
    for pick in combinations(a1, len(a2)):
        g = Alignment(np.array(pick, np.int64), np.array(a2, np.int64))
        if check_bwt_invariant(t1, t2, g):
            return True
    return False


def _perm_embeds(p1, p2):
    """True when p2 occurs in p1 as a pattern (order-isomorphic subsequence)."""
    from itertools import combinations

    m = len(p2)
    rel = tuple(np.argsort(np.argsort(p2)))
    for pick in combinations(range(len(p1)), m):
        sub = [p1[i] for i in pick]
        if tuple(np.argsort(np.argsort(sub))) == rel:
            return True
    return False


def run_suite(n=2000, seeds=3, ref_bytes=None, target_bytes=None):
    """Cross-check the fast structures against the oracles above.

    Returns (ok, report_lines).  Any mismatch appends a counterexample
    line and flips ok; all checks still run so the report is complete.
    """
    from itertools import permutations

    from relfm.fm import FMIndex
    from relfm.invariant import (
        check_bwt_invariant,
        invariant_subsequence,
        build_relative_sample,
        TwoChoiceArray,
        two_choice_lis,
    )
    from relfm.lcs import exact_lcs
    from relfm.text import Alphabet, Text, suffix_array, bwt_from_sa, invert_bwt

    lines = []
    ok = True

    def report(name, seed, good, detail=""):
        nonlocal ok
        status = "ok" if good else "FAIL"
        suffix = f" {detail}" if detail and not good else ""
        lines.append(f"check={name} seed={seed} status={status}{suffix}")
        if not good:
            ok = False

    alphabet = Alphabet(b"ACGNT", catchall=b"N")
    for seed in range(seeds):
        rng = np.random.default_rng(1000 + seed)
        raw1 = ref_bytes if ref_bytes is not None else random_dna(rng, n)
        raw2 = (
            target_bytes
            if target_bytes is not None
            else mutate(rng, raw1, 0.01)
        )
        raw1 = raw1[: max(n, 1)]
        raw2 = raw2[: max(n, 1)]
        t1 = Text.from_bytes(raw1, alphabet=alphabet)
        t2 = Text.from_bytes(raw2, alphabet=alphabet)

        sa = suffix_array(t1.codes)
        nsa = naive_suffix_array(t1.codes)
        good = sa.tolist() == [p + 1 for p in nsa]
        report("suffix_array", seed, good, f"first_diff={next((k for k, (a, b) in enumerate(zip(sa.tolist(), [p+1 for p in nsa])) if a != b), -1)}")

        bw = bwt_from_sa(t1.codes, sa)
        good = np.array_equal(invert_bwt(bw), t1.codes)
        report("bwt_roundtrip", seed, good)

        sub1 = raw1[:200]
        sub2 = raw2[:200]
        got = len(exact_lcs(sub1, sub2))
        want = lcs_length_memo(sub1, sub2)
        report("exact_lcs", seed, got == want, f"got={got} want={want}")

        ix1 = FMIndex.build(t1, rate=16)
        rs = build_relative_sample(ix1, t2, source_text=t1)
        rel = rs.rel
        bwt2 = bwt_from_sa(t2.codes, suffix_array(t2.codes))
        bad = None
        for a in range(alphabet.sigma):
            for i in rng.integers(0, t2.n + 2, size=64):
                if rel.rel_rank(a, int(i)) != naive_rank(bwt2, a, int(i)):
                    bad = (a, int(i))
                    break
            if bad:
                break
        report("rel_rank", seed, bad is None, f"symbol={bad[0]} prefix={bad[1]}" if bad else "")

        bad = None
        for _ in range(20):
            p0 = int(rng.integers(0, max(1, t2.n - 8)))
            pat = raw2[p0 : p0 + int(rng.integers(1, 9))]
            if not pat:
                continue
            want_pos = naive_occurrences(t2.codes[:-1], alphabet.encode(pat))
            if rs.locate_pattern(pat) != want_pos or rel.count(pat) != len(want_pos):
                bad = pat
                break
        report("rel_locate", seed, bad is None, f"pattern={bad!r}" if bad else "")

        g = invariant_subsequence(t1, t2)
        report("invariance", seed, check_bwt_invariant(t1, t2, g.as_alignment()))

    rng = np.random.default_rng(77)
    bad = None
    for _ in range(50):
        k = int(rng.integers(1, 9))
        pairs = [
            (
                int(rng.integers(1, 12)) if rng.random() < 0.8 else None,
                int(rng.integers(1, 12)) if rng.random() < 0.8 else None,
            )
            for _ in range(k)
        ]
        got = len(two_choice_lis(TwoChoiceArray.from_pairs(pairs)))
        want = brute_two_choice_lis(pairs)
        if got != want:
            bad = (pairs, got, want)
            break
    report("two_choice_lis", -1, bad is None, f"pairs={bad[0]} got={bad[1]} want={bad[2]}" if bad else "")

    bad = None
    for k1 in (1, 2, 3):
        for p1 in permutations(range(1, k1 + 1)):
            for k2 in range(1, k1 + 1):
                for p2 in permutations(range(1, k2 + 1)):
                    exists = marker_subsequence_exists(p1, p2)
                    embeds = _perm_embeds(p1, p2)
                    if embeds != exists:
                        bad = (p1, p2, exists)
                        break
    report("reduction", -1, bad is None, f"p1={bad[0]} p2={bad[1]} exists={bad[2]}" if bad else "")

    return ok, lines
