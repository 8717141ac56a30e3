"""Command-line front end: build, query, verify and benchmark index files.

Exit codes: 0 ok, 1 verification failure, 2 usage, 3 I/O or bad data.
"""

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from relfm import container, verify
from relfm.container import ContainerError
from relfm.fm import FMIndex
from relfm.invariant import RelativeSample, build_relative_sample
from relfm.lcs import PartitionSpec, partitioned_bwt_lcs
from relfm.relative import RelativeIndex

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _emit(pairs):
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.6f}"
        print(f"{key}={value}")


def _section_stats(path):
    data = _read(path)
    out = [("file_bytes", len(data))]
    for tag, size in sorted(container.section_sizes(data).items()):
        out.append((f"sec_{tag}", size))
    return out


def _probe_query_time(index, text):
    """Count a handful of planted patterns; returns seconds."""
    import numpy as np

    raw = text.alphabet.decode(text.codes[:-1])
    rng = np.random.default_rng(0)
    pats = []
    for _ in range(50):
        start = int(rng.integers(0, max(1, len(raw))))
        pats.append(raw[start : start + 12] or raw[:1])
    t0 = time.perf_counter()
    for p in pats:
        index.count(p)
    return time.perf_counter() - t0


def _load_reference(path):
    ref = container.load(path)
    if not isinstance(ref, FMIndex):
        raise ValueError("reference index required")
    return ref


def cmd_build(args):
    from relfm.text import load_text

    fmt = "fasta" if args.fasta else "plain"
    text = load_text(_read(args.text), format=fmt)
    t0 = time.perf_counter()
    index = FMIndex.build(text, rate=args.rate)
    build_s = time.perf_counter() - t0
    container.save(args.out, index)
    stats = [("n1", index.n), ("rate", index.rate), ("sigma", index.alphabet.sigma)]
    stats += _section_stats(args.out)
    stats += [("build_s", build_s), ("query_s", _probe_query_time(index, text))]
    _emit(stats)
    return EXIT_OK


def cmd_build_relative(args):
    from relfm.text import load_text

    ref = _load_reference(args.ref)
    fmt = "fasta" if args.fasta else "plain"
    target = load_text(_read(args.text), format=fmt, alphabet=ref.alphabet)
    part = PartitionSpec(args.max_block, args.max_depth, args.max_diag, args.hard_gap)

    t0 = time.perf_counter()
    ix2 = FMIndex.build(target, rate=ref.rate)
    stats = [("mode", args.mode), ("n1", ref.n), ("n2", target.n)]
    if args.mode == "lcs":
        align = partitioned_bwt_lcs(ref, ix2, part)
        obj = RelativeIndex.build(ref, ix2.bwt.decode(0, ix2.rows), align)
        rel = obj
        stats += [("align_len", len(align))]
    else:
        obj = build_relative_sample(ref, target, escape_gap=args.escape_gap)
        rel = obj.rel
        g_len = obj.m2.zeros
        lcs_approx = len(partitioned_bwt_lcs(ref, ix2, part))
        stats += [
            ("align_len", g_len),
            ("g_len", g_len),
            ("lcs_approx", lcs_approx),
            ("g_lcs_ratio", g_len / lcs_approx if lcs_approx else 0.0),
        ]
    build_s = time.perf_counter() - t0
    stats += [("bwd", (ref.n + 1) + (target.n + 1) - 2 * rel.b1.zeros)]
    container.save(args.out, obj)
    stats += _section_stats(args.out)
    sections = container.section_sizes(_read(args.out))
    rel_bytes = sections.get("RFM1", 0) + sections.get("INV1", 0)
    standalone_bytes = len(ix2.payload())
    stats += [
        ("rel_bytes", rel_bytes),
        ("standalone_bytes", standalone_bytes),
        ("rel_standalone_ratio", rel_bytes / standalone_bytes),
        ("build_s", build_s),
        ("query_s", _probe_query_time(rel, target)),
    ]
    _emit(stats)
    return EXIT_OK


def _query_worker(index, op):
    def run(item):
        lineno, pattern = item
        if not pattern:
            return "", f"line {lineno}: empty pattern"
        if op == "count":
            return str(index.count(pattern)), None
        if isinstance(index, RelativeSample):
            positions = index.locate_pattern(pattern)
        else:
            positions = index.locate(index.range_of(pattern))
        return ",".join(str(int(p)) for p in positions), None

    return run


def cmd_query(args):
    reference = _load_reference(args.reference) if args.reference else None
    index = container.load(args.index, reference=reference)
    if args.op == "locate" and isinstance(index, RelativeIndex):
        raise ValueError("index lacks locating support")
    raw_lines = _read(args.patterns).split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()
    items = list(enumerate(raw_lines, start=1))
    run = _query_worker(index, args.op)
    threads = max(1, int(os.environ.get("RFMX_THREADS", "1")))
    if threads == 1:
        results = [run(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, items))
    for out_line, err in results:
        print(out_line)
        if err:
            print(err, file=sys.stderr)
    return EXIT_OK


def cmd_stats(args):
    reference = _load_reference(args.reference) if args.reference else None
    index = container.load(args.index, reference=reference)
    stats = []
    if isinstance(index, FMIndex):
        stats += [
            ("kind", "standalone"),
            ("n1", index.n),
            ("rate", index.rate),
            ("sigma", index.alphabet.sigma),
        ]
    else:
        rel = index.rel if isinstance(index, RelativeSample) else index
        ell = rel.b1.zeros
        stats += [
            ("kind", "relative+sample" if isinstance(index, RelativeSample) else "relative"),
            ("n1", rel.ref.n),
            ("n2", rel.n2),
            ("align_len", ell),
            ("bwd", (rel.ref.n + 1) + (rel.n2 + 1) - 2 * ell),
            ("delta_symbols", len(rel.delta.symbols)),
        ]
        if isinstance(index, RelativeSample):
            stats += [
                ("g_len", index.m2.zeros),
                ("escape_rows", index.esc_rows.size),
                ("escape_gap", index.gap),
            ]
    stats += _section_stats(args.index)
    _emit(stats)
    return EXIT_OK


def cmd_verify(args):
    ref_bytes = _read(args.ref) if args.ref else None
    target_bytes = _read(args.target) if args.target else None
    ok, lines = verify.run_suite(
        n=args.n, seeds=args.seeds, ref_bytes=ref_bytes, target_bytes=target_bytes
    )
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(args):
    from relfm import bench

    for line in bench.run(
        n=args.n, rate=args.rate, mutation=args.mutation, patterns=args.patterns
    ):
        print(line)
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rfmx", description="Relative FM-index toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a text file")
    p.add_argument("text")
    p.add_argument("out")
    p.add_argument("--rate", type=int, default=32)
    p.add_argument("--fasta", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("build-relative", help="index a text against a reference index")
    p.add_argument("ref")
    p.add_argument("text")
    p.add_argument("out")
    p.add_argument("--mode", choices=("lcs", "invariant"), default="lcs")
    p.add_argument("--max-block", type=int, default=1024)
    p.add_argument("--max-depth", type=int, default=32)
    p.add_argument("--max-diag", type=int, default=50000)
    p.add_argument("--hard-gap", type=int, default=50000)
    p.add_argument("--escape-gap", type=int, default=None)
    p.add_argument("--fasta", action="store_true")
    p.set_defaults(func=cmd_build_relative)

    p = sub.add_parser("query", help="run count or locate over a pattern file")
    p.add_argument("index")
    p.add_argument("op", choices=("count", "locate"))
    p.add_argument("patterns")
    p.add_argument("--reference")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="report sizes and parameters of an index file")
    p.add_argument("index")
    p.add_argument("--reference")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="cross-check the structures against oracles")
    p.add_argument("ref", nargs="?")
    p.add_argument("target", nargs="?")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seeds", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time both kernel backends on one corpus")
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--rate", type=int, default=32)
    p.add_argument("--mutation", type=float, default=0.01)
    p.add_argument("--patterns", type=int, default=200)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContainerError, OSError, ValueError) as exc:
        print(f"rfmx: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
