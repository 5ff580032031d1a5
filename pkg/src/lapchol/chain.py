"""Elimination chain: recursive block factorization build and application.

``build_chain`` peels 5-DD vertex sets off the graph level by level,
replacing each eliminated block by a random-walk sparsification of its
Schur complement, until at most 100 vertices remain; the remainder is
factorized densely.  ``apply_chain`` runs the forward/backward
substitution through the stored blocks, using the truncated Jacobi
operator for each interior block, and acts as a symmetric linear operator
whose inverse approximates the input Laplacian.

With ``mode="exact"`` the random sparsifier is swapped for the dense Schur
complement and the Jacobi solves for exact block inverses; the resulting
operator is the exact pseudoinverse, which pins down the surrounding
plumbing in tests independent of any randomness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import exact_oracle
from .dd_subset import five_dd_subset
from .errors import DimensionMismatch, Disconnected, InputError, InternalError
from .jacobi import JacobiOperator, apply_jacobi, from_splitting
from .multigraph import VERTEX_DTYPE, WeightedMultiGraph, is_connected
from .terminal_walks import terminal_walks
from ._kernels import scatter_weighted

BASE_SIZE = 100


@dataclass
class LevelStats:
    n: int
    m: int
    f_size: int
    rounds_used: int
    walked: int
    discarded: int
    mean_walk_length: float
    max_walk_length: int


@dataclass
class ChainLevel:
    """Blocks of one elimination step, in level-local indices.

    ``f_ids``/``c_ids`` index the level's input graph; the Jacobi splitting
    and the cross edges are stored in positions within those arrays.
    ``f_global``/``c_global`` map back to original vertex ids.
    """

    n_level: int
    f_ids: np.ndarray
    c_ids: np.ndarray
    f_global: np.ndarray
    c_global: np.ndarray
    x_diag: np.ndarray
    y_graph: WeightedMultiGraph
    cf_c: np.ndarray
    cf_f: np.ndarray
    cf_w: np.ndarray
    jacobi: Optional[JacobiOperator] = None
    ff_inverse: Optional[np.ndarray] = None  # exact mode only
    graph: Optional[WeightedMultiGraph] = None  # level input graph, if kept

    def solve_ff(self, b: np.ndarray) -> np.ndarray:
        if self.ff_inverse is not None:
            return self.ff_inverse @ b
        return apply_jacobi(self.jacobi, b)

    def dense_ff(self) -> np.ndarray:
        return np.diag(self.x_diag) + exact_oracle.dense_laplacian(self.y_graph).a

    def dense_fc(self) -> np.ndarray:
        out = np.zeros((self.f_ids.size, self.c_ids.size))
        np.add.at(out, (self.cf_f, self.cf_c), -self.cf_w)
        return out


@dataclass
class FactorizationChain:
    n: int
    d: int
    levels: List[ChainLevel]
    base_graph: WeightedMultiGraph
    base_global: np.ndarray
    base_pinv: np.ndarray
    stats: List[LevelStats]
    seed: int
    mode: str
    jacobi_epsilon: float
    edge_counts: List[int] = field(default_factory=list)  # m of G^(0..d)

    @property
    def walk_lengths_pooled(self):
        total = sum(s.walked for s in self.stats)
        if total == 0:
            return 0.0, 0
        mean = sum(s.mean_walk_length * s.walked for s in self.stats) / total
        return mean, max(s.max_walk_length for s in self.stats)


def max_levels_bound(n: int) -> int:
    """Analytic level bound: each level keeps at most 39/40 of the vertices."""
    if n <= BASE_SIZE:
        return 0
    return math.ceil(math.log(n / BASE_SIZE) / math.log(40.0 / 39.0))


def build_chain(g: WeightedMultiGraph, cfg, *, mode: str = "randomized",
                keep_graphs: Optional[bool] = None) -> FactorizationChain:
    """Eliminate down to the dense base case and record every level's blocks.

    ``cfg`` supplies the seed (all randomness is derived from it) and,
    optionally, ``walk_cap``.  The caller is responsible for alpha-bounding
    the multi-edges when approximation guarantees are needed; the build
    itself only requires connectivity.
    """
    if mode not in ("randomized", "exact"):
        raise InputError(f"unknown elimination mode {mode!r}")
    if not is_connected(g):
        raise Disconnected("chain requires a connected input graph")
    seed = int(getattr(cfg, "seed", 0))
    walk_cap = getattr(cfg, "walk_cap", None)
    if keep_graphs is None:
        keep_graphs = g.n <= exact_oracle.ORACLE_SIZE_CAP
    if mode == "exact":
        keep_graphs = True

    levels: List[ChainLevel] = []
    stats: List[LevelStats] = []
    edge_counts = [g.m]
    current = g
    cur_ids = np.arange(g.n, dtype=np.int64)
    level_cap = max_levels_bound(g.n) + 16
    k = 0
    while current.n > BASE_SIZE:
        k += 1
        if k > level_cap:
            raise InternalError(f"elimination exceeded {level_cap} levels")
        rng = np.random.default_rng([seed & 0x7FFFFFFF, 0xDD, k])
        dd = five_dd_subset(current, rng)
        level, nxt, lstats = _eliminate(current, dd.f, seed, k, walk_cap, mode)
        level.f_global = cur_ids[level.f_ids]
        level.c_global = cur_ids[level.c_ids]
        if keep_graphs:
            level.graph = current
        lstats.rounds_used = dd.rounds_used
        cur_ids = cur_ids[level.c_ids]
        levels.append(level)
        stats.append(lstats)
        edge_counts.append(nxt.m)
        # cheap proxy; the base case gets a full connectivity check
        if nxt.n > 1 and (nxt.m < nxt.n - 1 or np.any(nxt.weighted_degrees <= 0.0)):
            raise Disconnected(f"level {k} output lost connectivity")
        current = nxt

    if not is_connected(current):
        raise Disconnected("base graph is disconnected")
    base_pinv = exact_oracle.dense_laplacian(current).pinv()

    d = len(levels)
    eps = 1.0 / (2.0 * d) if d > 0 else 0.5
    if mode == "randomized":
        for level in levels:
            level.jacobi = from_splitting(level.x_diag, level.y_graph, eps)
    return FactorizationChain(
        n=g.n, d=d, levels=levels, base_graph=current, base_global=cur_ids,
        base_pinv=base_pinv, stats=stats, seed=seed, mode=mode,
        jacobi_epsilon=eps, edge_counts=edge_counts,
    )


def _eliminate(g: WeightedMultiGraph, f: np.ndarray, seed: int, k: int,
               walk_cap, mode: str):
    """Split off the blocks for eliminating ``f`` and produce the next graph."""
    in_f = np.zeros(g.n, dtype=bool)
    in_f[f] = True
    c = np.flatnonzero(~in_f).astype(np.int64)
    if c.size == 0:
        raise InternalError("elimination set swallowed the whole graph")
    pos_f = np.full(g.n, -1, dtype=VERTEX_DTYPE)
    pos_f[f] = np.arange(f.size, dtype=VERTEX_DTYPE)
    pos_c = np.full(g.n, -1, dtype=VERTEX_DTYPE)
    pos_c[c] = np.arange(c.size, dtype=VERTEX_DTYPE)

    fu = in_f[g.us]
    fv = in_f[g.vs]
    both = fu & fv
    y_graph = WeightedMultiGraph(f.size, pos_f[g.us[both]], pos_f[g.vs[both]],
                                 g.ws[both], validate=False)
    x_diag = g.weighted_degrees[f] - y_graph.weighted_degrees
    cross = fu ^ fv
    f_end = np.where(fu[cross], g.us[cross], g.vs[cross])
    c_end = np.where(fu[cross], g.vs[cross], g.us[cross])
    level = ChainLevel(
        n_level=g.n, f_ids=f, c_ids=c, f_global=f, c_global=c,
        x_diag=x_diag, y_graph=y_graph,
        cf_c=pos_c[c_end], cf_f=pos_f[f_end], cf_w=g.ws[cross],
    )

    if mode == "exact":
        level.ff_inverse = np.linalg.inv(level.dense_ff())
        schur = exact_oracle.dense_schur(exact_oracle.dense_laplacian(g), c)
        nxt = exact_oracle.graph_from_dense(schur)
        lstats = LevelStats(g.n, g.m, f.size, 0, 0, 0, 0.0, 0)
    else:
        tw = terminal_walks(g, c, seed, cap=walk_cap, stream=k)
        nxt = tw.graph
        s = tw.stats
        lstats = LevelStats(g.n, g.m, f.size, 0, s.walked, s.discarded,
                            s.mean_length, s.max_length)
        # each input edge spawns at most one output edge
        if nxt.m > g.m:
            raise InternalError("edge count grew across a level")
    return level, nxt, lstats


def apply_chain(chain: FactorizationChain, b: np.ndarray) -> np.ndarray:
    """Forward/backward substitution through the chain; symmetric and linear.

    Input and output are projected against the all-ones vector, so the
    operator maps onto the complement of the Laplacian kernel.
    """
    b = np.ascontiguousarray(b, dtype=np.float64)
    if b.shape != (chain.n,):
        raise DimensionMismatch(f"vector has shape {b.shape}, expected ({chain.n},)")
    cur = b - b.mean()
    saved = []
    for level in chain.levels:
        b_f = cur[level.f_ids]
        b_c = cur[level.c_ids]
        y_f = level.solve_ff(b_f)
        # L_CF y_f has a minus sign on every cross edge, hence the +=
        y_c = b_c + scatter_weighted(level.cf_c, level.cf_f, level.cf_w,
                                     y_f, level.c_ids.size)
        saved.append(y_f)
        cur = y_c
    x = chain.base_pinv @ cur
    for level, y_f in zip(reversed(chain.levels), reversed(saved)):
        t_f = scatter_weighted(level.cf_f, level.cf_c, level.cf_w,
                               x, level.f_ids.size)
        x_f = y_f + level.solve_ff(t_f)
        nxt = np.empty(level.n_level)
        nxt[level.f_ids] = x_f
        nxt[level.c_ids] = x
        x = nxt
    return x - x.mean()


def chain_report_lines(chain: FactorizationChain) -> List[str]:
    """Per-level statistics rendered as plain text."""
    mean_len, max_len = chain.walk_lengths_pooled
    lines = [
        f"levels = {chain.d}",
        f"base vertices = {chain.base_graph.n}",
        f"base edges = {chain.base_graph.m}",
        f"pooled mean walk length = {mean_len:.3f}",
        f"pooled max walk length = {max_len}",
        "level  n  m  |F|  rounds  walked  discarded  mean_len  max_len",
    ]
    for i, s in enumerate(chain.stats, 1):
        lines.append(
            f"{i}  {s.n}  {s.m}  {s.f_size}  {s.rounds_used}  {s.walked}  "
            f"{s.discarded}  {s.mean_walk_length:.3f}  {s.max_walk_length}"
        )
    return lines
