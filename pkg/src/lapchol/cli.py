"""Command line front end: solve, schur, and factor modes.

Exit codes: 0 on success, 1 for parse or validation failures, 2 for
numerical failures (retries exhausted, walk caps).
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from typing import List, Optional

import numpy as np

from . import graph_io
from .alpha_bound import BoundingConfig, split_naive
from .errors import InputError, NumericalError
from .generators import grid_graph, path_graph, random_regular_graph
from .multigraph import WeightedMultiGraph
from .richardson import SolverConfig, solve
from .schur_approx import SchurConfig, approx_schur, schur_alpha_inverse
from .chain import build_chain, chain_report_lines
from .runtime import set_threads


class _UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit-code control in main()
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="lapchol", description=__doc__, add_help=True)
    p.add_argument("--mode", choices=("solve", "schur", "factor"), default="solve")
    p.add_argument("--graph", help="input graph file")
    p.add_argument("--format", choices=("auto", "edgelist", "matrixmarket"),
                   default="auto")
    p.add_argument("--demo", metavar="SPEC",
                   help="generated input instead of --graph: path:N, grid:RxC, "
                        "or regular:N:D")
    p.add_argument("--rhs", help="right-hand side, one value per line (solve)")
    p.add_argument("--terminals", help="terminal vertex ids, one per line (schur)")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--alpha-c0", type=float, default=1.0)
    p.add_argument("--alpha-inverse", type=float, default=None,
                   help="override the ceil(c0 ln^2 n) split ratio")
    p.add_argument("--bounding-mode", choices=("naive", "estimate"), default="naive")
    p.add_argument("--K", type=int, default=4, dest="subsample_factor")
    p.add_argument("--jl-rows", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--report", help="write the run report to this path")
    p.add_argument("--output", help="write the result to this path (default stdout)")
    return p


def _load_graph(args) -> WeightedMultiGraph:
    if (args.graph is None) == (args.demo is None):
        raise _UsageError("exactly one of --graph or --demo is required")
    if args.graph is not None:
        graph_io.require_file(args.graph)
        return graph_io.read_graph(args.graph, args.format)
    return _demo_graph(args.demo, args.seed)


def _demo_graph(spec: str, seed: int) -> WeightedMultiGraph:
    parts = spec.split(":")
    try:
        if parts[0] == "path" and len(parts) == 2:
            return path_graph(int(parts[1]))
        if parts[0] == "grid" and len(parts) == 2:
            r, c = parts[1].lower().split("x")
            return grid_graph(int(r), int(c))
        if parts[0] == "regular" and len(parts) == 3:
            rng = np.random.default_rng([seed & 0x7FFFFFFF, 0xDE30])
            return random_regular_graph(int(parts[1]), int(parts[2]), rng)
    except ValueError as exc:
        raise _UsageError(f"bad --demo spec {spec!r}: {exc}") from None
    raise _UsageError(f"bad --demo spec {spec!r} (use path:N, grid:RxC, regular:N:D)")


def _emit(path: Optional[str], lines: List[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        epsilon=args.epsilon, alpha_c0=args.alpha_c0,
        alpha_inverse=args.alpha_inverse, bounding_mode=args.bounding_mode,
        subsample_factor=args.subsample_factor, jl_rows=args.jl_rows,
        seed=args.seed, threads=args.threads, deterministic=args.deterministic,
    )


def _run_solve(args) -> int:
    if args.rhs is None:
        raise _UsageError("--rhs is required in solve mode")
    g = _load_graph(args)
    b = graph_io.read_vector(graph_io.require_file(args.rhs))
    if b.size != g.n:
        raise InputError(f"rhs has {b.size} entries, graph has {g.n} vertices")
    x, report = solve(g, b, _solver_config(args))
    _emit(args.output, [graph_io.FLOAT_FMT % v for v in x])
    if args.report:
        _emit(args.report, ["mode = solve"] + report.lines())
    print(f"solve: n={g.n} m={g.m} levels={report.levels} "
          f"iterations={report.iterations} residual={report.residual_norm:.3e} "
          f"time={report.build_seconds + report.solve_seconds:.3f}s",
          file=sys.stderr)
    return 0


def _run_schur(args) -> int:
    if args.terminals is None:
        raise _UsageError("--terminals is required in schur mode")
    g = _load_graph(args)
    c = graph_io.read_terminals(graph_io.require_file(args.terminals), g.n)
    if args.alpha_inverse is not None:
        alpha_inv = args.alpha_inverse
    else:
        alpha_inv = schur_alpha_inverse(g.n, args.epsilon, args.alpha_c0)
    t0 = time.perf_counter()
    bounded = split_naive(g, BoundingConfig(alpha_inverse=alpha_inv, seed=args.seed))
    cfg = SchurConfig(epsilon=args.epsilon, alpha_c0=args.alpha_c0, seed=args.seed)
    result = approx_schur(bounded, c, cfg)
    elapsed = time.perf_counter() - t0
    lines = [f"# schur complement on {result.c_ids.size} terminals",
             f"# eps = {args.epsilon:g}, alpha_inverse = {alpha_inv:g}"]
    lines += [f"# terminal {new} {orig}" for new, orig in enumerate(result.c_ids)]
    h = result.graph
    lines += [f"{u} {v} {graph_io.FLOAT_FMT % w}"
              for u, v, w in zip(h.us, h.vs, h.ws)]
    _emit(args.output, lines)
    if args.report:
        _emit(args.report, [
            "mode = schur", f"n = {g.n}", f"m = {g.m}",
            f"multi_edges = {bounded.m}", f"terminals = {result.c_ids.size}",
            f"levels = {result.levels}", f"output_edges = {h.m}",
            f"seconds = {elapsed:.3f}", f"seed = {args.seed}",
        ])
    print(f"schur: n={g.n} terminals={result.c_ids.size} levels={result.levels} "
          f"output_edges={h.m} time={elapsed:.3f}s", file=sys.stderr)
    return 0


def _run_factor(args) -> int:
    g = _load_graph(args)
    cfg = _solver_config(args)
    bcfg = BoundingConfig(
        alpha_inverse=(args.alpha_inverse if args.alpha_inverse is not None
                       else max(1, math.ceil(args.alpha_c0 * math.log(max(g.n, 2)) ** 2))),
        seed=args.seed)
    t0 = time.perf_counter()
    bounded = split_naive(g, bcfg)
    chain = build_chain(bounded, cfg)
    elapsed = time.perf_counter() - t0
    lines = ["mode = factor", f"n = {g.n}", f"m = {g.m}",
             f"multi_edges = {bounded.m}",
             f"alpha_inverse = {bcfg.alpha_inverse:g}",
             f"seconds = {elapsed:.3f}", f"seed = {args.seed}"]
    lines += chain_report_lines(chain)
    _emit(args.report or args.output, lines)
    print(f"factor: n={g.n} multi_edges={bounded.m} levels={chain.d} "
          f"time={elapsed:.3f}s", file=sys.stderr)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is not None or args.deterministic:
            set_threads(1 if args.deterministic else args.threads)
        if args.mode == "solve":
            return _run_solve(args)
        if args.mode == "schur":
            return _run_schur(args)
        return _run_factor(args)
    except _UsageError as exc:
        print(f"lapchol: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"lapchol: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"lapchol: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
