"""Command-line front end: solver runs, hierarchy/report tables, benchmarks.

Subcommands: fiedler, hierarchy, bisect, bench, gcmg, gcmg-rates. Reports
go to stdout (or --out); diagnostics and errors go to stderr, and no
partial JSON is ever emitted on the output stream. Exit codes: 0 success,
1 input/parse error, 2 solver finished without converging on the finest
level. The FIEDCMG_THREADS environment variable caps internal parallelism
(default 1; see the package init).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .coarsen import CoarseningError, build_hierarchy
from .gcmg import GcmgConfig, gcmg_solve, rate_experiment
from .laplacian import GraphFormatError, build_laplacian, load_graph
from .oracle import SIZE_GUARD, fiedler_oracle, subspace_angle
from .smoother import SmootherConfig
from .solver import SolverConfig, solve_fiedler, spectral_bisect

GRAPH_SUFFIXES = (".mtx", ".el", ".edges", ".edgelist", ".txt")


def _add_graph_arg(p):
    p.add_argument("input", help="graph file (Matrix Market or edge list)")
    p.add_argument("--format", choices=["matrix-market", "edge-list"],
                   default=None, help="input format (default: by extension)")


def _add_solver_args(p):
    p.add_argument("--tol", type=float, default=1e-8,
                   help="power-iteration stopping tolerance (default 1e-8)")
    p.add_argument("--max-iters", type=int, default=1000,
                   help="power-iteration cap per level (default 1000)")
    p.add_argument("--coarsest-size", type=int, default=25,
                   help="stop coarsening at this many vertices (default 25)")


def _add_common(p, out_help="write output here instead of stdout"):
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--out", default=None, help=out_help)


def _add_plot(p):
    p.add_argument("--plot", nargs="?", const="", default=None,
                   metavar="PNG", help="also render a figure (default path: "
                   "next to --out, or <command>.png)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fiedcmg",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiedler", help="compute the Fiedler pair of a graph")
    _add_graph_arg(p)
    _add_solver_args(p)
    _add_common(p, "write the JSON result here instead of stdout")
    p.add_argument("--vector", default=None, metavar="PATH",
                   help="write the vector as little-endian float64 binary")
    p.add_argument("--oracle", action="store_true",
                   help=f"cross-check against the dense oracle (n <= {SIZE_GUARD})")

    p = sub.add_parser("hierarchy", help="print the coarsening ladder")
    _add_graph_arg(p)
    p.add_argument("--coarsest-size", type=int, default=25)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    _add_common(p)
    _add_plot(p)

    p = sub.add_parser("bisect", help="balanced spectral bisection")
    _add_graph_arg(p)
    _add_solver_args(p)
    _add_common(p, "write the 0/1 labels here, one per line")

    p = sub.add_parser("bench", help="run the solver over a directory of graphs")
    p.add_argument("directory", help="directory of graph files")
    p.add_argument("--seeds", default="0", help="comma-separated seed list")
    _add_solver_args(p)
    p.add_argument("--out", default=None, help="write the CSV here instead of stdout")
    _add_plot(p)

    p = sub.add_parser("gcmg", help="geometric cascadic run on an N x N grid")
    p.add_argument("--n", type=int, required=True, help="finest points per side")
    p.add_argument("--beta", type=float, default=4.0, help="smoothing growth factor")
    p.add_argument("--k0", type=int, default=1, help="finest-level smoothing steps")
    p.add_argument("--levels", default="auto",
                   help="level count, or 'auto' to halve down to side 65")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    _add_common(p)
    _add_plot(p)

    p = sub.add_parser("gcmg-rates", help="mesh-size convergence-order fit")
    p.add_argument("--sizes", default="65,129,257",
                   help="comma-separated finest sides")
    p.add_argument("--beta", type=float, default=8.0)
    p.add_argument("--k0", type=int, default=4)
    p.add_argument("--coarsest-side", type=int, default=17,
                   help="common coarsest side all sizes nest onto")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    _add_common(p)
    _add_plot(p)

    return ap


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _plot_path(args, stem: str) -> str | None:
    if args.plot is None:
        return None
    if args.plot:
        return args.plot
    if getattr(args, "out", None):
        return str(Path(args.out).with_suffix(".png"))
    return f"{stem}.png"


def _load(args):
    t0 = time.perf_counter()
    g = load_graph(args.input, fmt=args.format)
    lap = build_laplacian(g)
    dt = time.perf_counter() - t0
    print(f"parsed {args.input}: n={g.n} m={g.edge_count} "
          f"({dt:.3f}s)", file=sys.stderr)
    return g, lap, dt


def _solver_config(args) -> SolverConfig:
    sm = SmootherConfig(tol=args.tol, max_iters=args.max_iters)
    return SolverConfig(coarsest_size=args.coarsest_size, smoother=sm,
                        seed=args.seed)


def cmd_fiedler(args) -> int:
    g, lap, parse_t = _load(args)
    result = solve_fiedler(lap, _solver_config(args))
    doc = {
        "n": g.n,
        "nnz": lap.nnz,
        "seed": args.seed,
        "lambda2": result.lambda2,
        "residual": result.residual,
        "wall_time_s": result.wall_time,
        "setup_time_s": result.setup_time,
        "parse_time_s": parse_t,
        "levels": [
            {"n": r.n, "nnz": r.nnz, "iterations": r.iterations,
             "converged": r.converged}
            for r in result.per_level
        ],
    }
    if args.vector:
        Path(args.vector).write_bytes(result.vector.astype("<f8").tobytes())
        doc["vector_path"] = args.vector
    if args.oracle:
        lam2, basis = fiedler_oracle(lap)
        doc["oracle"] = {
            "lambda2": lam2,
            "angle_rad": subspace_angle(result.vector, basis),
        }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0 if result.converged else 2


def cmd_hierarchy(args) -> int:
    _, lap, _ = _load(args)
    h = build_hierarchy(lap, coarsest_size=args.coarsest_size, seed=args.seed)
    lines = []
    if args.csv:
        lines.append("level,n,nnz,rate")
        for s in h.stats:
            rate = f"{s.rate:.6f}" if s.rate is not None else ""
            lines.append(f"{s.level},{s.n},{s.nnz},{rate}")
    else:
        lines.append(f"{'level':>5} {'n':>10} {'nnz':>12} {'rate':>8}")
        for s in h.stats:
            rate = f"{s.rate:.4f}" if s.rate is not None else "-"
            lines.append(f"{s.level:>5} {s.n:>10} {s.nnz:>12} {rate:>8}")
    _emit("\n".join(lines), args.out)

    path = _plot_path(args, "hierarchy")
    if path:
        from .plots import plot_hierarchy
        plot_hierarchy(h.stats, path)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def cmd_bisect(args) -> int:
    _, lap, _ = _load(args)
    labels, cut, result = spectral_bisect(lap, _solver_config(args))
    sizes = (int(np.sum(labels == 0)), int(np.sum(labels == 1)))
    print(f"part sizes: {sizes[0]}/{sizes[1]}", file=sys.stderr)
    print(f"cut weight: {cut}", file=sys.stderr)
    print(f"lambda2: {result.lambda2}", file=sys.stderr)
    body = "\n".join(str(int(x)) for x in labels)
    _emit(body, args.out)
    return 0 if result.converged else 2


def _bench_one(path: Path, seed: int, args) -> dict:
    rec = {"name": path.stem, "n": "", "m": "", "seed": seed, "time_s": "",
           "lambda2": "", "residual": "", "converged": None}
    try:
        t0 = time.perf_counter()
        g = load_graph(str(path))
        lap = build_laplacian(g)
        parse_t = time.perf_counter() - t0
        rec["n"], rec["m"] = g.n, g.edge_count
        cfg = SolverConfig(coarsest_size=args.coarsest_size,
                           smoother=SmootherConfig(tol=args.tol,
                                                   max_iters=args.max_iters),
                           seed=seed)
        result = solve_fiedler(lap, cfg)
        rec.update(time_s=result.wall_time, lambda2=result.lambda2,
                   residual=result.residual, converged=result.converged)
        print(f"{path.name} seed={seed}: parse {parse_t:.3f}s "
              f"setup {result.setup_time:.3f}s total {result.wall_time:.3f}s "
              f"residual {result.residual:.3e}", file=sys.stderr)
    except (GraphFormatError, CoarseningError, ValueError, OSError) as exc:
        rec["converged"] = False
        print(f"{path.name} seed={seed}: failed: {exc}", file=sys.stderr)
    return rec


def cmd_bench(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return 1
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip() != ""]
    except ValueError:
        print(f"error: bad --seeds list {args.seeds!r}", file=sys.stderr)
        return 1
    files = sorted(p for p in root.iterdir()
                   if p.is_file() and p.suffix in GRAPH_SUFFIXES)

    records = []
    lines = ["name,n,m,seed,time_s,lambda2,residual,converged"]
    for path in files:
        for seed in seeds:
            rec = _bench_one(path, seed, args)
            records.append(rec)
            conv = "" if rec["converged"] is None else str(rec["converged"]).lower()
            lines.append(
                f"{rec['name']},{rec['n']},{rec['m']},{rec['seed']},"
                f"{rec['time_s']},{rec['lambda2']},{rec['residual']},{conv}")
    _emit("\n".join(lines), args.out)

    path = _plot_path(args, "bench")
    if path and any(r["converged"] for r in records):
        from .plots import plot_bench
        plot_bench([r for r in records if r["time_s"] != ""], path)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def cmd_gcmg(args) -> int:
    levels = None if args.levels == "auto" else int(args.levels)
    cfg = GcmgConfig(n_side_finest=args.n, levels=levels, beta=args.beta,
                     k0=args.k0, seed=args.seed)
    report = gcmg_solve(cfg)
    lines = []
    if args.csv:
        lines.append("level,n_side,k_steps,lambda2_ref,err_pre,err_post")
        for r in report.rows:
            lines.append(f"{r.index},{r.n_side},{r.k_steps},{r.lambda2_ref!r},"
                         f"{r.err_pre!r},{r.err_post!r}")
        lines.append(f"# total_work={report.work}")
        lines.append(f"# lambda2={report.lambda2!r}")
    else:
        lines.append(f"{'i':>3} {'N_i':>7} {'k_i':>7} {'err_pre':>12} {'err_post':>12}")
        for r in report.rows:
            k = str(r.k_steps) if r.k_steps else "-"
            lines.append(f"{r.index:>3} {r.n_side:>7} {k:>7} "
                         f"{r.err_pre:>12.4e} {r.err_post:>12.4e}")
        lines.append(f"total work (sum k_j n_j): {report.work}")
        lines.append(f"lambda2: {report.lambda2!r}")
    _emit("\n".join(lines), args.out)

    path = _plot_path(args, "gcmg")
    if path:
        from .plots import plot_gcmg
        plot_gcmg(report, path)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def cmd_gcmg_rates(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip() != ""]
    except ValueError:
        print(f"error: bad --sizes list {args.sizes!r}", file=sys.stderr)
        return 1
    table = rate_experiment(sizes, beta=args.beta, k0=args.k0,
                            coarsest_side=args.coarsest_side, seed=args.seed)
    lines = []
    if args.csv:
        lines.append("n_side,h0,error")
        for p in table.points:
            lines.append(f"{p.n_side},{p.h0!r},{p.error!r}")
        lines.append(f"# fitted_order={table.fitted_order!r}")
    else:
        lines.append(f"{'N':>7} {'h0':>12} {'error':>14}")
        for p in table.points:
            lines.append(f"{p.n_side:>7} {p.h0:>12.6e} {p.error:>14.6e}")
        lines.append(f"fitted order in h0: {table.fitted_order:.3f}")
    _emit("\n".join(lines), args.out)

    path = _plot_path(args, "gcmg-rates")
    if path:
        from .plots import plot_rates
        plot_rates(table, path)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


_COMMANDS = {
    "fiedler": cmd_fiedler,
    "hierarchy": cmd_hierarchy,
    "bisect": cmd_bisect,
    "bench": cmd_bench,
    "gcmg": cmd_gcmg,
    "gcmg-rates": cmd_gcmg_rates,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GraphFormatError, CoarseningError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
