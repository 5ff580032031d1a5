"""Standalone sparse approximation of a Schur complement onto terminals.

Eliminates all of V minus C level by level: each level samples a 5-DD set
from the induced subgraph on the not-yet-eliminated interior (a 5-DD set
of an induced subgraph is 5-DD in the whole graph), then replaces it by
terminal random walks.  The loop runs until the interior is exhausted, so
the output lives exactly on C, has no more multi-edges than the input,
and its Laplacian approximates the true Schur complement within the
target factor when the input was split finely enough.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .chain import LevelStats
from .dd_subset import five_dd_subset
from .errors import InputError, InternalError
from .multigraph import VERTEX_DTYPE, WeightedMultiGraph, induced_subgraph
from .terminal_walks import terminal_walks


@dataclass
class SchurConfig:
    epsilon: float
    alpha_c0: float = 1.0
    seed: int = 0
    walk_cap: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise InputError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if self.alpha_c0 <= 0.0:
            raise InputError(f"alpha_c0 must be positive, got {self.alpha_c0}")


def schur_alpha_inverse(n: int, epsilon: float, c0: float = 1.0) -> int:
    """Split ratio ceil(c0 * eps^-2 * ln(n)^2) required for an eps target."""
    return max(1, math.ceil(c0 * epsilon ** -2 * math.log(max(n, 2)) ** 2))


@dataclass
class ApproxSchurResult:
    graph: WeightedMultiGraph
    c_ids: np.ndarray  # new id -> original id (ascending)
    levels: int
    stats: List[LevelStats]


def approx_schur(g: WeightedMultiGraph, c: Sequence[int],
                 cfg: SchurConfig) -> ApproxSchurResult:
    """Sparse eps-approximation of the Schur complement onto ``c``.

    The caller is responsible for alpha-bounding the input (see
    :func:`schur_alpha_inverse` and the splitting module) when the
    spectral guarantee matters.
    """
    c_ids = np.unique(np.asarray(c, dtype=np.int64))
    if c_ids.size == 0:
        raise InputError("terminal set must be nonempty")
    if c_ids[0] < 0 or c_ids[-1] >= g.n:
        raise InputError("terminal set not contained in the graph")
    if c_ids.size == g.n:
        raise InputError("terminal set must be a proper subset of the vertices")

    in_c = np.zeros(g.n, dtype=bool)
    in_c[c_ids] = True
    interior = np.flatnonzero(~in_c).astype(np.int64)  # current-local ids
    s0 = interior.size
    level_cap = math.ceil(math.log(max(s0, 2)) / math.log(40.0 / 39.0)) + 16
    current = g
    stats: List[LevelStats] = []
    k = 0
    while interior.size > 0:
        k += 1
        if k > level_cap:
            raise InternalError(f"schur elimination exceeded {level_cap} levels")
        sub, sub_ids = induced_subgraph(current, interior)
        rng = np.random.default_rng([cfg.seed & 0x7FFFFFFF, 0xA5, k])
        dd = five_dd_subset(sub, rng)
        f_local = sub_ids[dd.f]
        keep = np.ones(current.n, dtype=bool)
        keep[f_local] = False
        terminals = np.flatnonzero(keep).astype(np.int64)
        tw = terminal_walks(current, terminals, cfg.seed, cap=cfg.walk_cap, stream=k)
        s = tw.stats
        stats.append(LevelStats(current.n, current.m, f_local.size, dd.rounds_used,
                                s.walked, s.discarded, s.mean_length, s.max_length))
        # re-index the remaining interior into the new graph's ids
        pos = np.full(current.n, -1, dtype=VERTEX_DTYPE)
        pos[tw.c_ids] = np.arange(tw.c_ids.size, dtype=VERTEX_DTYPE)
        interior_old = np.setdiff1d(interior, f_local, assume_unique=True)
        interior = pos[interior_old].astype(np.int64)
        current = tw.graph
        if current.m > g.m:
            raise InternalError("edge count grew across a level")
    return ApproxSchurResult(graph=current, c_ids=c_ids, levels=k, stats=stats)
