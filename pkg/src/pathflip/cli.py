"""Command-line front end.

Subcommands: generate, anonymize, reconstruct, verify, stats, invariants,
bench.  Exit codes: 0 success, 1 I/O failure, 2 malformed input, 3 input is
not a flip graph (the message names the failing stage), 4 verification
mismatch, 5 invariant failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import fileio
from .fileio import Config, FileFormatError
from .paths import CrossingEdges, NotPermutation, UnsupportedN
from .pathgraph import DiameterTooExpensive, anonymize, build, stats
from .reconstruct import NotAPathGraphError, reconstruct_all
from .rng import PERMUTATION_ALGORITHM
from .verify import NoDihedralMatch, find_matching_symmetry, invariant_suite


def cmd_generate(args: argparse.Namespace, cfg: Config) -> int:
    g = build(args.n)
    fileio.write_graph(
        args.graph, g, [f"flip graph of non-crossing spanning paths, n={args.n}"]
    )
    fileio.write_labels(args.labels, g.labels, [f"path labels, n={args.n}"])
    print(f"n={args.n} vertices={g.vertex_count} edges={g.edge_count()}")
    return 0


def cmd_anonymize(args: argparse.Namespace, cfg: Config) -> int:
    g = fileio.read_graph(args.graph)
    anon, secret = anonymize(g, args.seed)
    fileio.write_graph(
        args.out, anon, [f"anonymized with {PERMUTATION_ALGORITHM} seed={args.seed}"]
    )
    if args.secret:
        fileio.write_secret(
            args.secret, secret, [f"{PERMUTATION_ALGORITHM} seed={args.seed}"]
        )
    print(f"vertices={anon.vertex_count} seed={args.seed}")
    return 0


def cmd_reconstruct(args: argparse.Namespace, cfg: Config) -> int:
    g = fileio.read_graph(args.graph)
    result = reconstruct_all(g, cross_check=args.cross_check or cfg.cross_check)
    fileio.write_labels(
        args.out, result.paths, [f"reconstructed labels, n={result.n}"]
    )
    print(f"n={result.n} vertices={len(result.paths)} max_level={max(result.levels)}")
    return 0


def cmd_verify(args: argparse.Namespace, cfg: Config) -> int:
    fileio.read_graph(args.graph)  # consistency check only
    originals = fileio.read_labels(args.labels)
    recovered = fileio.read_labels(args.recovered)
    secret = fileio.read_secret(args.secret)
    if not (len(originals) == len(recovered) == len(secret)):
        raise FileFormatError("labelings and secret disagree on vertex count")
    sym = find_matching_symmetry(originals, secret, recovered)
    print(f"rot={sym.rotation}, refl={int(sym.reflected)}")
    return 0


def _write_report(path: str, lines: list[str]) -> None:
    fileio.write_text_atomic(path, "\n".join(lines) + "\n")


def cmd_stats(args: argparse.Namespace, cfg: Config) -> int:
    if args.n is not None:
        g = build(args.n)
        title = f"flip graph degree distribution, n={args.n}"
    else:
        g = fileio.read_graph(args.graph)
        title = f"degree distribution of {Path(args.graph).name}"
    diameter_line = None
    try:
        rep = stats(g, include_diameter=args.diameter, diameter_cap=cfg.diameter_cap)
    except DiameterTooExpensive as exc:
        rep = stats(g)
        diameter_line = f"diameter=GATED ({exc})"
    lines = [
        f"vertices={rep.vertex_count}",
        f"edges={rep.edge_count}",
        f"max_degree={rep.max_degree}",
        "degree_histogram=" + " ".join(f"{d}:{c}" for d, c in rep.degree_histogram.items()),
    ]
    if diameter_line:
        lines.append(diameter_line)
    elif rep.diameter is not None:
        lines.append(f"diameter={rep.diameter}")
    for line in lines:
        print(line)
    if args.report:
        _write_report(args.report, lines)
        if not args.no_figures:
            fig = Path(args.report).with_suffix("").as_posix() + "_degrees.png"
            from .figures import save_degree_histogram

            save_degree_histogram(rep.degree_histogram, fig, title)
            print(f"figure={fig}")
    return 0


def cmd_invariants(args: argparse.Namespace, cfg: Config) -> int:
    report = invariant_suite(args.n, cfg)
    for line in report.text_lines():
        print(line)
    if args.report:
        _write_report(args.report, report.kv_lines())
        if not args.no_figures:
            fig = Path(args.report).with_suffix("").as_posix() + "_degrees.png"
            from .figures import save_degree_histogram

            save_degree_histogram(
                report.degree_histogram, fig, f"flip graph degree distribution, n={args.n}"
            )
            print(f"figure={fig}")
    return 0 if report.ok else 5


def cmd_bench(args: argparse.Namespace, cfg: Config) -> int:
    """Time build and reconstruction per n, streaming CSV rows as they finish."""
    if args.n_min < 5 or args.n_max < args.n_min:
        raise FileFormatError(f"invalid range {args.n_min}..{args.n_max}")
    out = Path(args.out)
    rows: list[dict] = []
    tmp = out.with_name(out.name + ".partial")
    code = 0
    with open(tmp, "w") as fh:
        fh.write("n,vertices,edges,build_ms,reconstruct_ms\n")
        fh.flush()
        try:
            for n in range(args.n_min, args.n_max + 1):
                t0 = time.perf_counter()
                g = build(n)
                build_ms = (time.perf_counter() - t0) * 1000.0
                anon, _ = anonymize(g, args.seed)
                t0 = time.perf_counter()
                reconstruct_all(anon)
                recon_ms = (time.perf_counter() - t0) * 1000.0
                row = {
                    "n": n,
                    "vertices": g.vertex_count,
                    "edges": g.edge_count(),
                    "build_ms": round(build_ms, 3),
                    "reconstruct_ms": round(recon_ms, 3),
                }
                rows.append(row)
                fh.write(
                    f"{row['n']},{row['vertices']},{row['edges']},"
                    f"{row['build_ms']},{row['reconstruct_ms']}\n"
                )
                fh.flush()
                print(
                    f"n={n} vertices={row['vertices']} build_ms={row['build_ms']} "
                    f"reconstruct_ms={row['reconstruct_ms']}"
                )
        except MemoryError:
            print("error: out of memory, flushing partial results", file=sys.stderr)
            code = 1
    tmp.replace(out)
    if code == 0 and rows and not args.no_figures:
        from .figures import save_scaling_plot

        fig = out.with_suffix("").as_posix() + "_scaling.png"
        save_scaling_plot(rows, fig)
        print(f"figure={fig}")
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathflip",
        description="Flip graphs of non-crossing spanning paths: generate, anonymize, reconstruct, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a flip graph and its labels")
    p.add_argument("n", type=int, help="number of convex points (>= 5)")
    p.add_argument("--graph", required=True, help="output edge-list file")
    p.add_argument("--labels", required=True, help="output labeling file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("anonymize", help="shuffle vertex ids with a seeded permutation")
    p.add_argument("graph", help="input edge-list file")
    p.add_argument("--seed", type=int, default=None, help="64-bit permutation seed")
    p.add_argument("--out", required=True, help="output edge-list file")
    p.add_argument("--secret", help="output file mapping abstract ids back to originals")
    p.set_defaults(func=cmd_anonymize)

    p = sub.add_parser("reconstruct", help="recover path labels from bare adjacency")
    p.add_argument("graph", help="input edge-list file")
    p.add_argument("--out", required=True, help="output labeling file")
    p.add_argument(
        "--cross-check",
        action="store_true",
        help="recover boundary sets by both methods and compare",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="match a reconstruction against the original labels")
    p.add_argument("--graph", required=True, help="original edge-list file")
    p.add_argument("--labels", required=True, help="original labeling file")
    p.add_argument("--recovered", required=True, help="reconstructed labeling file")
    p.add_argument("--secret", required=True, help="anonymization secret file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="structural numbers of a graph")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int, help="build the flip graph for this n")
    grp.add_argument("--graph", help="read a graph file instead")
    p.add_argument("--diameter", action="store_true", help="also compute the diameter")
    p.add_argument("--report", help="write a key-value report file")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.add_argument("--diameter-cap", type=int, default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("invariants", help="run the structural invariant suite")
    p.add_argument("n", type=int, help="number of convex points (>= 5)")
    p.add_argument("--report", help="write a key-value report file")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.add_argument("--seed", type=int, default=None, help="seed for the round-trip checks")
    p.add_argument("--diameter-cap", type=int, default=None)
    p.add_argument("--automorphism-cap", type=int, default=None)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("bench", help="time build and reconstruction across a range of n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV file")
    p.add_argument("--seed", type=int, default=None, help="anonymization seed")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_bench)

    return parser


def _config_for(args: argparse.Namespace) -> Config:
    cfg = Config.from_env()
    from dataclasses import replace

    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    else:
        if hasattr(args, "seed"):
            args.seed = cfg.seed
    if getattr(args, "diameter_cap", None) is not None:
        cfg = replace(cfg, diameter_cap=args.diameter_cap)
    if getattr(args, "automorphism_cap", None) is not None:
        cfg = replace(cfg, automorphism_cap=args.automorphism_cap)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _config_for(args)
    try:
        return args.func(args, cfg)
    except (FileFormatError, UnsupportedN, NotPermutation, CrossingEdges) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotAPathGraphError as exc:
        print(f"error: not a path graph (stage={exc.stage}): {exc}", file=sys.stderr)
        return 3
    except NoDihedralMatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
