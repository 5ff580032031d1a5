"""Edge splitting that bounds every multi-edge's leverage score.

A multi-edge is alpha-bounded when its weight times its effective
resistance is at most alpha.  Splitting an edge into k parallel copies of
weight w/k leaves the Laplacian unchanged and divides each copy's leverage
by k, so either a uniform split (every leverage score of a simple graph is
at most 1) or a split proportional to per-edge leverage overestimates
produces an alpha-bounded multigraph representing the same matrix.

The overestimates come from the standard sketching route: subsample the
graph, solve a logarithmic number of systems in the subsample against
random sign vectors, and read resistances off squared sketch distances.
The inner systems are solved by a caller-provided solver handle, which
keeps this module free of any dependency on the outer solver.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DisconnectedSubsample, InputError
from .multigraph import WeightedMultiGraph, is_connected

log = logging.getLogger(__name__)

# multiplier applied on top of the sketched resistances; the estimation
# constant is not pinned by theory here, so it is configuration
DEFAULT_SAFETY = 1.5

SolverFactory = Callable[[WeightedMultiGraph], Callable[[np.ndarray], np.ndarray]]


@dataclass
class BoundingConfig:
    alpha_inverse: float
    mode: str = "naive"
    subsample_factor: int = 4  # K: the subsample keeps m/K edges
    jl_rows: int = 0  # 0 means auto: 4 ceil(ln n), at least 8
    seed: int = 0
    overestimate_safety: float = DEFAULT_SAFETY
    max_resample_attempts: int = 10

    def __post_init__(self):
        if self.alpha_inverse < 1.0:
            raise InputError(f"alpha_inverse must be >= 1, got {self.alpha_inverse}")
        if self.mode not in ("naive", "estimate"):
            raise InputError(f"unknown bounding mode {self.mode!r}")
        if self.subsample_factor < 1:
            raise InputError("subsample factor K must be a positive integer")
        if self.overestimate_safety < 1.0:
            raise InputError("overestimate safety factor must be >= 1")
        if self.max_resample_attempts < 1:
            raise InputError("need at least one subsample attempt")

    def rows_for(self, n: int) -> int:
        if self.jl_rows > 0:
            return self.jl_rows
        return max(8, 4 * math.ceil(math.log(max(n, 2))))


def split_naive(g: WeightedMultiGraph, cfg: BoundingConfig) -> WeightedMultiGraph:
    """Uniform split: every edge becomes ceil(alpha_inverse) copies.

    Exact: the output Laplacian equals the input's.  Each copy of an edge
    of a simple graph is (1/copies)-bounded, hence alpha-bounded.
    """
    copies = math.ceil(cfg.alpha_inverse)
    if copies <= 1:
        return g
    us = np.repeat(g.us, copies)
    vs = np.repeat(g.vs, copies)
    ws = np.repeat(g.ws / copies, copies)
    return WeightedMultiGraph(g.n, us, vs, ws, validate=False)


def split_by_estimates(g: WeightedMultiGraph, tau_hat: np.ndarray,
                       cfg: BoundingConfig) -> WeightedMultiGraph:
    """Split edge e into ceil(alpha_inverse * tau_hat(e)) copies."""
    tau_hat = np.asarray(tau_hat, dtype=np.float64)
    if tau_hat.shape != (g.m,):
        raise InputError(f"need one estimate per edge, got shape {tau_hat.shape}")
    if np.any(tau_hat <= 0) or not np.all(np.isfinite(tau_hat)):
        raise InputError("leverage estimates must be positive and finite")
    copies = np.maximum(1, np.ceil(cfg.alpha_inverse * tau_hat)).astype(np.int64)
    us = np.repeat(g.us, copies)
    vs = np.repeat(g.vs, copies)
    ws = np.repeat(g.ws / copies, copies)
    return WeightedMultiGraph(g.n, us, vs, ws, validate=False)


def estimate_leverage_overestimates(
    g: WeightedMultiGraph, cfg: BoundingConfig, make_solver: SolverFactory,
    allow_fallback: bool = True,
) -> np.ndarray:
    """Per-edge leverage overestimates of ``g`` via a sparser subsample.

    Procedure: keep m/K uniformly chosen edges at their original weights,
    sketch the subsample's resistances with jl_rows random sign vectors
    (one inner solve each, through ``make_solver``), and score each
    original edge by its weight times the squared sketch distance of its
    endpoints, times the configured safety factor.  Dropping edges only
    raises effective resistances, so up to sketch noise the scores
    dominate the true leverage in ``g``.
    """
    k = cfg.subsample_factor
    if not 0 < k < max(g.m, 2):
        raise InputError(f"K must satisfy 0 < K < m, got K={k}, m={g.m}")
    keep = max(1, g.m // k)
    sub = None
    for attempt in range(cfg.max_resample_attempts):
        rng = np.random.default_rng([cfg.seed & 0x7FFFFFFF, 0x5B, attempt])
        chosen = rng.choice(g.m, size=keep, replace=False)
        cand = WeightedMultiGraph(g.n, g.us[chosen], g.vs[chosen],
                                  g.ws[chosen], validate=False)
        if is_connected(cand):
            sub = cand
            break
    if sub is None:
        if not allow_fallback:
            raise DisconnectedSubsample(
                f"subsample stayed disconnected after {cfg.max_resample_attempts} attempts"
            )
        log.warning(
            "edge subsample disconnected after %d attempts; adding a spanning tree",
            cfg.max_resample_attempts,
        )
        tree = _kernels.spanning_tree_edges(g.us, g.vs, g.n)
        us = np.concatenate([g.us[chosen], g.us[tree]])
        vs = np.concatenate([g.vs[chosen], g.vs[tree]])
        ws = np.concatenate([g.ws[chosen], g.ws[tree]])
        sub = WeightedMultiGraph(g.n, us, vs, ws, validate=False)

    rows = cfg.rows_for(g.n)
    solver = make_solver(sub)
    rng = np.random.default_rng([cfg.seed & 0x7FFFFFFF, 0x7E57])
    sqrt_w = np.sqrt(sub.ws)
    sketch = np.empty((rows, g.n))
    for i in range(rows):
        signs = rng.choice((-1.0, 1.0), size=sub.m) / math.sqrt(rows)
        y = signs * sqrt_w
        rhs = np.bincount(sub.us, weights=y, minlength=g.n)
        rhs -= np.bincount(sub.vs, weights=y, minlength=g.n)
        sketch[i] = solver(rhs)
    dist2 = ((sketch[:, g.us] - sketch[:, g.vs]) ** 2).sum(axis=0)
    return cfg.overestimate_safety * g.ws * dist2
