"""Truncated Jacobi inverse for 5-DD blocks.

A 5-DD block splits as M = X + Y with X a positive diagonal and Y the
Laplacian of the induced interior subgraph.  The operator applied here is
the truncated alternating series

    Z = sum_{i=0}^{l} X^{-1} (-Y X^{-1})^i,   l odd,  l >= log2(3 / eps),

realized by the fixed-point iteration x <- X^{-1} b - X^{-1} Y x.  For odd
l it satisfies M <= Z^{-1} <= M + eps * Y in the semidefinite order, which
is what the elimination chain needs from its inner solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InputError, NotFiveDD
from .multigraph import WeightedMultiGraph


def jacobi_iterations(epsilon: float) -> int:
    """Smallest odd integer l with l >= log2(3 / epsilon)."""
    if not 0.0 < epsilon < 1.0:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    l = max(1, math.ceil(math.log2(3.0 / epsilon)))
    return l if l % 2 == 1 else l + 1


@dataclass(frozen=True)
class JacobiOperator:
    """Splitting (X, Y) of a 5-DD block plus the iteration count for eps."""

    x_diag: np.ndarray
    y_graph: WeightedMultiGraph
    l: int
    epsilon: float

    @property
    def size(self) -> int:
        return self.x_diag.size

    def with_epsilon(self, epsilon: float) -> "JacobiOperator":
        return replace(self, l=jacobi_iterations(epsilon), epsilon=epsilon)


def from_splitting(x_diag: np.ndarray, y_graph: WeightedMultiGraph,
                   epsilon: float) -> JacobiOperator:
    x_diag = np.ascontiguousarray(x_diag, dtype=np.float64)
    if x_diag.shape != (y_graph.n,):
        raise DimensionMismatch(
            f"diagonal has size {x_diag.size}, interior graph has {y_graph.n} vertices"
        )
    if np.any(x_diag <= 0):
        raise InputError("diagonal of the splitting must be positive")
    # 5-DD of X + Y is exactly X >= 4 * (weighted degree in Y), up to roundoff
    slack = 1e-9 * (x_diag + y_graph.weighted_degrees)
    if np.any(x_diag + slack < 4.0 * y_graph.weighted_degrees):
        bad = int(np.argmax(4.0 * y_graph.weighted_degrees - x_diag))
        raise NotFiveDD(
            f"row {bad}: diagonal {x_diag[bad]:.3g} below 4x interior degree "
            f"{y_graph.weighted_degrees[bad]:.3g}"
        )
    return JacobiOperator(x_diag, y_graph, jacobi_iterations(epsilon), float(epsilon))


def build_jacobi(g: WeightedMultiGraph, f, epsilon: float) -> JacobiOperator:
    """Operator for the block of ``g`` on the 5-DD set ``f``.

    Indices of the operator follow ascending order of ``f``.  Raises
    NotFiveDD when the row condition fails.
    """
    from .multigraph import induced_subgraph

    f = np.unique(np.asarray(f, dtype=np.int64))
    if f.size == 0:
        raise InputError("elimination set must be nonempty")
    y_graph, ids = induced_subgraph(g, f)
    x_diag = g.weighted_degrees[ids] - y_graph.weighted_degrees
    return from_splitting(x_diag, y_graph, epsilon)


def apply_jacobi(op: JacobiOperator, b: np.ndarray) -> np.ndarray:
    """Run the iteration x <- X^{-1} b - X^{-1} Y x for l steps from X^{-1} b."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    if b.shape != (op.size,):
        raise DimensionMismatch(f"vector has shape {b.shape}, expected ({op.size},)")
    y = op.y_graph
    x = b / op.x_diag
    if y.m == 0:
        return x
    for _ in range(op.l):
        x = (b - _kernels.laplacian_apply(y.us, y.vs, y.ws, y.weighted_degrees, x)) / op.x_diag
    return x


def dense_jacobi_matrix(op: JacobiOperator) -> np.ndarray:
    """Explicit series sum (test support; independent of the iteration path)."""
    from .exact_oracle import dense_laplacian

    x_inv = np.diag(1.0 / op.x_diag)
    y = dense_laplacian(op.y_graph).a
    term = x_inv.copy()
    z = term.copy()
    for _ in range(op.l):
        term = -x_inv @ (y @ term)
        z += term
    return z


def dense_block(op: JacobiOperator) -> np.ndarray:
    """The dense 5-DD block M = X + Y the operator approximates."""
    from .exact_oracle import dense_laplacian

    return np.diag(op.x_diag) + dense_laplacian(op.y_graph).a
