"""Preconditioned Richardson iteration and the top-level solver facade.

``precon_richardson`` runs the classic fixed-count iteration

    x_{k} = (I - a B A) x_{k-1} + a x_0,   x_0 = B b,
    a = 2 / (exp(-delta) + exp(delta)),

for ceil(exp(2 delta) * ln(1 / eps)) steps, which yields an eps-accurate
solution in the A-norm whenever B approximates the pseudoinverse of A
within a factor exp(delta) on both sides.  ``solve`` assembles the whole
pipeline: alpha-bounding split, elimination chain, outer iteration.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from .alpha_bound import (
    BoundingConfig,
    estimate_leverage_overestimates,
    split_by_estimates,
    split_naive,
)
from .chain import apply_chain, build_chain, chain_report_lines
from .errors import Disconnected, InputError, NumericalError, RetriesExhausted
from .multigraph import WeightedMultiGraph, apply_laplacian, is_connected

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass
class SolverConfig:
    """Knobs of the end-to-end solver.

    ``alpha_c0`` scales the default split ratio ceil(c0 * ln(n)^2);
    ``alpha_inverse`` overrides it outright when set.  ``delta`` is the
    assumed preconditioner quality (the chain gives 1).  All randomness
    derives from ``seed``.
    """

    epsilon: float = 1e-6
    delta: float = 1.0
    alpha_c0: float = 1.0
    alpha_inverse: Optional[float] = None
    bounding_mode: str = "naive"
    subsample_factor: int = 4
    jl_rows: int = 0
    seed: int = 0
    threads: Optional[int] = None
    deterministic: bool = False
    walk_cap: Optional[int] = None
    max_build_attempts: int = 3

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise InputError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if self.delta <= 0.0:
            raise InputError(f"delta must be positive, got {self.delta}")
        if self.alpha_c0 <= 0.0:
            raise InputError(f"alpha_c0 must be positive, got {self.alpha_c0}")
        if self.bounding_mode not in ("naive", "estimate"):
            raise InputError(f"unknown bounding mode {self.bounding_mode!r}")
        if self.max_build_attempts < 1:
            raise InputError("need at least one build attempt")


@dataclass
class SolveReport:
    n: int
    m: int
    multi_edges: int
    alpha_inverse: int
    levels: int
    iterations: int
    residual_norm: float
    projection_magnitude: float
    build_attempts: int
    build_seconds: float
    solve_seconds: float
    seed: int
    bounding_mode: str
    epsilon: float
    delta: float
    deterministic: bool
    chain_lines: List[str] = field(default_factory=list)

    def lines(self) -> List[str]:
        out = [
            f"n = {self.n}",
            f"m = {self.m}",
            f"multi_edges = {self.multi_edges}",
            f"alpha_inverse = {self.alpha_inverse}",
            f"levels = {self.levels}",
            f"iterations = {self.iterations}",
            f"residual_norm = {self.residual_norm:.6e}",
            f"projection_magnitude = {self.projection_magnitude:.6e}",
            f"build_attempts = {self.build_attempts}",
            f"build_seconds = {self.build_seconds:.3f}",
            f"solve_seconds = {self.solve_seconds:.3f}",
            f"seed = {self.seed}",
            f"bounding_mode = {self.bounding_mode}",
            f"epsilon = {self.epsilon:g}",
            f"delta = {self.delta:g}",
            f"deterministic = {self.deterministic}",
        ]
        return out + self.chain_lines


def richardson_iterations(delta: float, epsilon: float) -> int:
    """ceil(exp(2 delta) * ln(1 / epsilon)); natural logarithm."""
    return math.ceil(math.exp(2.0 * delta) * math.log(1.0 / epsilon))


def precon_richardson(apply_a: Operator, apply_b: Operator, b: np.ndarray,
                      delta: float, epsilon: float,
                      callback: Optional[Callable[[int, np.ndarray], None]] = None,
                      ) -> np.ndarray:
    """Fixed-count preconditioned Richardson iteration.

    Projects the right-hand side and every iterate against the all-ones
    vector (the shared kernel of the operators this package produces), so
    roundoff cannot accumulate a kernel component over many iterations.
    """
    b = np.asarray(b, dtype=np.float64)
    b = b - b.mean()
    step = 2.0 / (math.exp(-delta) + math.exp(delta))
    x0 = apply_b(b)
    x0 -= x0.mean()
    x = x0.copy()
    if callback is not None:
        callback(0, x)
    for k in range(1, richardson_iterations(delta, epsilon) + 1):
        r = apply_b(apply_a(x))
        x = x - step * r + step * x0
        x -= x.mean()
        if callback is not None:
            callback(k, x)
    return x


def alpha_inverse_for(n: int, c0: float = 1.0) -> int:
    """Default split ratio ceil(c0 * ln(n)^2), at least 1."""
    return max(1, math.ceil(c0 * math.log(max(n, 2)) ** 2))


def _bounding_config(cfg: SolverConfig, n: int) -> BoundingConfig:
    alpha_inv = cfg.alpha_inverse
    if alpha_inv is None:
        alpha_inv = alpha_inverse_for(n, cfg.alpha_c0)
    return BoundingConfig(
        alpha_inverse=float(alpha_inv), mode=cfg.bounding_mode,
        subsample_factor=cfg.subsample_factor, jl_rows=cfg.jl_rows,
        seed=cfg.seed,
    )


def chain_solver_factory(epsilon: float = 0.25, seed: int = 0,
                         alpha_c0: float = 1.0):
    """Solver handle for bootstrap uses (leverage estimation inner solves).

    Returns ``factory(graph) -> apply(b) -> x``.  Always uses the naive
    split, which cuts the recursion: estimation never re-enters itself.
    """
    def factory(g: WeightedMultiGraph) -> Operator:
        cfg = SolverConfig(epsilon=epsilon, seed=seed, alpha_c0=alpha_c0,
                           bounding_mode="naive")
        bcfg = _bounding_config(cfg, g.n)
        chain, _ = _build_with_retries(split_naive(g, bcfg), cfg)

        def apply(b: np.ndarray) -> np.ndarray:
            return precon_richardson(
                lambda x: apply_laplacian(g, x),
                lambda x: apply_chain(chain, x),
                b, cfg.delta, cfg.epsilon,
            )

        return apply

    return factory


def _build_with_retries(h: WeightedMultiGraph, cfg: SolverConfig):
    # Disconnected can be a low-probability sampling event (every parallel
    # copy of a cut edge discarded), not only bad input; a fresh seed fixes it
    last = None
    for attempt in range(cfg.max_build_attempts):
        try:
            chain = build_chain(h, replace(cfg, seed=cfg.seed + 1_000_003 * attempt),
                                keep_graphs=False)  # solving never needs level graphs
            return chain, attempt + 1
        except (NumericalError, Disconnected) as exc:
            last = exc
    raise RetriesExhausted(
        f"chain build failed {cfg.max_build_attempts} times: {last}"
    )


def solve(g: WeightedMultiGraph, b: np.ndarray, cfg: Optional[SolverConfig] = None):
    """Solve L x = b to relative accuracy epsilon in the L-norm.

    Returns (x, report).  The right-hand side is projected against the
    all-ones vector if needed; the projection magnitude lands in the
    report.  Requires a connected graph.
    """
    if cfg is None:
        cfg = SolverConfig()
    if not is_connected(g):
        raise Disconnected("solve requires a connected graph")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (g.n,):
        raise InputError(f"rhs has shape {b.shape}, expected ({g.n},)")
    projection = abs(b.sum()) / math.sqrt(g.n)
    b = b - b.mean()

    t0 = time.perf_counter()
    bcfg = _bounding_config(cfg, g.n)
    if cfg.bounding_mode == "naive":
        h = split_naive(g, bcfg)
    else:
        factory = chain_solver_factory(epsilon=0.25, seed=cfg.seed + 0x600,
                                       alpha_c0=cfg.alpha_c0)
        tau_hat = estimate_leverage_overestimates(g, bcfg, factory)
        h = split_by_estimates(g, tau_hat, bcfg)
    chain, attempts = _build_with_retries(h, cfg)
    t1 = time.perf_counter()

    if np.linalg.norm(b) == 0.0:
        x = np.zeros(g.n)
        iterations = 0
    else:
        x = precon_richardson(
            lambda v: apply_laplacian(g, v),
            lambda v: apply_chain(chain, v),
            b, cfg.delta, cfg.epsilon,
        )
        iterations = richardson_iterations(cfg.delta, cfg.epsilon)
    t2 = time.perf_counter()

    bnorm = np.linalg.norm(b)
    residual = float(np.linalg.norm(apply_laplacian(g, x) - b) / bnorm) if bnorm else 0.0
    report = SolveReport(
        n=g.n, m=g.m, multi_edges=h.m, alpha_inverse=int(bcfg.alpha_inverse),
        levels=chain.d, iterations=iterations, residual_norm=residual,
        projection_magnitude=projection, build_attempts=attempts,
        build_seconds=t1 - t0, solve_seconds=t2 - t1, seed=cfg.seed,
        bounding_mode=cfg.bounding_mode, epsilon=cfg.epsilon, delta=cfg.delta,
        deterministic=cfg.deterministic, chain_lines=chain_report_lines(chain),
    )
    return x, report
