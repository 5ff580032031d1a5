"""Dense reference implementations used by tests and the chain base case.

Everything here is exact up to LAPACK roundoff and deliberately slow:
explicit Schur complements, pseudoinverse solves with the all-ones
direction deflated, leverage scores, and explicit assembly of the block
factorization encoded by an elimination chain.  Instances above
``ORACLE_SIZE_CAP`` vertices are refused to keep test runtimes desk-scale.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    Disconnected,
    InputError,
    KernelMismatch,
    OracleSizeExceeded,
    SingularBlock,
)
from .multigraph import WeightedMultiGraph

if TYPE_CHECKING:  # pragma: no cover
    from .chain import FactorizationChain

ORACLE_SIZE_CAP = 2048


def _check_size(n: int) -> None:
    if n > ORACLE_SIZE_CAP:
        raise OracleSizeExceeded(
            f"dense oracle is limited to {ORACLE_SIZE_CAP} vertices, got {n}"
        )


class DenseLaplacian:
    """Dense symmetric Laplacian with kernel metadata.

    Validates symmetry, nonpositive off-diagonals and zero row sums at
    construction.  ``kernel_dim`` is the number of connected components of
    the support graph (1 for connected inputs).
    """

    def __init__(self, a: np.ndarray, *, validate: bool = True):
        a = np.ascontiguousarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"expected a square matrix, got shape {a.shape}")
        _check_size(a.shape[0])
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        if validate:
            if np.abs(a - a.T).max(initial=0.0) > 1e-12 * scale:
                raise InputError("matrix is not symmetric")
            off = a - np.diag(np.diag(a))
            if off.max(initial=0.0) > 1e-12 * scale:
                raise InputError("positive off-diagonal entry")
            if np.abs(a.sum(axis=1)).max(initial=0.0) > 1e-10 * scale:
                raise InputError("row sums are not zero")
        self.a = a
        self.kernel_dim = _component_count(a, scale)
        self._pinv = None

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def pinv(self) -> np.ndarray:
        """Pseudoinverse via eigendecomposition, all-ones direction deflated.

        The deflation is exact (an explicit orthonormal basis of the
        complement), so no eigenvalue thresholding is involved.
        """
        if self._pinv is None:
            if self.kernel_dim != 1:
                raise KernelMismatch(
                    f"kernel dimension is {self.kernel_dim}, expected 1 (connected)"
                )
            q = _ones_complement_basis(self.n)
            lam, vec = scipy.linalg.eigh(q.T @ self.a @ q)
            if self.n > 1 and lam.min() <= 0.0:
                raise KernelMismatch("deflated matrix is not positive definite")
            basis = q @ vec
            self._pinv = (basis / lam) @ basis.T if self.n > 1 else np.zeros((1, 1))
        return self._pinv


def _component_count(a: np.ndarray, scale: float) -> int:
    import scipy.sparse as sp
    from scipy.sparse.csgraph import connected_components

    support = sp.csr_matrix(np.abs(a - np.diag(np.diag(a))) > 1e-14 * scale)
    ncomp, _ = connected_components(support, directed=False)
    return int(ncomp)


def _ones_complement_basis(n: int) -> np.ndarray:
    """Columns form an orthonormal basis of the complement of the ones vector."""
    if n == 1:
        return np.zeros((1, 0))
    # Householder reflection mapping e_1 to ones/sqrt(n); columns 2..n span 1-perp
    v = -np.ones(n) / np.sqrt(n)
    v[0] += 1.0
    v /= np.linalg.norm(v)
    h = np.eye(n) - 2.0 * np.outer(v, v)
    return h[:, 1:]


def dense_laplacian(g: WeightedMultiGraph) -> DenseLaplacian:
    _check_size(g.n)
    a = np.zeros((g.n, g.n))
    np.add.at(a, (g.us, g.vs), -g.ws)
    np.add.at(a, (g.vs, g.us), -g.ws)
    a[np.diag_indices(g.n)] = g.weighted_degrees
    return DenseLaplacian(a, validate=False)


def graph_from_dense(l: DenseLaplacian, tol: float = 1e-12) -> WeightedMultiGraph:
    """Inverse of :func:`dense_laplacian`; drops entries below ``tol`` * scale."""
    a = l.a
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    iu, ju = np.triu_indices(l.n, k=1)
    w = -a[iu, ju]
    keep = w > tol * scale
    return WeightedMultiGraph(l.n, iu[keep], ju[keep], w[keep], validate=False)


def dense_schur(l: DenseLaplacian, c: Sequence[int]) -> DenseLaplacian:
    """Exact Schur complement onto the vertex set ``c``.

    ``c = V`` passes the matrix through unchanged.  A singular interior
    block (some component of the graph avoids ``c``) raises SingularBlock.
    """
    c_ids = np.unique(np.asarray(c, dtype=np.int64))
    if c_ids.size == 0:
        raise InputError("terminal set must be nonempty")
    if c_ids[0] < 0 or c_ids[-1] >= l.n:
        raise InputError("terminal set not contained in the vertex set")
    if c_ids.size == l.n:
        return DenseLaplacian(l.a.copy(), validate=False)
    mask = np.zeros(l.n, dtype=bool)
    mask[c_ids] = True
    f_ids = np.flatnonzero(~mask)
    a_ff = l.a[np.ix_(f_ids, f_ids)]
    a_fc = l.a[np.ix_(f_ids, c_ids)]
    a_cc = l.a[np.ix_(c_ids, c_ids)]
    try:
        factor = scipy.linalg.cho_factor(a_ff)
    except np.linalg.LinAlgError as exc:
        raise SingularBlock(f"interior block is singular: {exc}") from None
    s = a_cc - a_fc.T @ scipy.linalg.cho_solve(factor, a_fc)
    s = 0.5 * (s + s.T)
    return DenseLaplacian(s, validate=False)


def pinv_solve(l: DenseLaplacian, b: np.ndarray) -> np.ndarray:
    """x with L x = (b projected onto 1-perp) and x summing to zero."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (l.n,):
        raise InputError(f"vector has shape {b.shape}, expected ({l.n},)")
    return l.pinv() @ b


def leverage_score(l: DenseLaplacian, edge) -> float:
    """tau(e) = w * b_e^T L^+ b_e for edge (u, v, w)."""
    u, v, w = edge
    p = l.pinv()
    return float(w) * float(p[u, u] + p[v, v] - 2.0 * p[u, v])


def leverage_scores(l: DenseLaplacian, us, vs, ws) -> np.ndarray:
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    p = l.pinv()
    d = np.diag(p)
    return np.asarray(ws, dtype=np.float64) * (d[us] + d[vs] - 2.0 * p[us, vs])


def relative_spectral_error(a: DenseLaplacian, b: DenseLaplacian) -> float:
    """Smallest eps with exp(-eps) B <= A <= exp(eps) B on the ones-complement.

    Computed as max |ln lambda| over the generalized eigenvalues of the
    pencil (A, B) restricted to the complement of the shared kernel.
    """
    if a.n != b.n:
        raise KernelMismatch(f"size mismatch: {a.n} vs {b.n}")
    if a.kernel_dim != 1 or b.kernel_dim != 1:
        raise KernelMismatch("both matrices must be connected Laplacians")
    q = _ones_complement_basis(a.n)
    ar = q.T @ a.a @ q
    br = q.T @ b.a @ q
    try:
        lam = scipy.linalg.eigh(ar, br, eigvals_only=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise KernelMismatch(f"pencil is not definite: {exc}") from None
    if lam.min() <= 1e-12:
        raise KernelMismatch("pencil has a (near-)zero eigenvalue, kernels differ")
    return float(np.abs(np.log(lam)).max())


def assemble_chain_matrix(chain: "FactorizationChain") -> DenseLaplacian:
    """Explicit U^T D U for an elimination chain, in original vertex ids.

    D carries the eliminated diagonal blocks and the base Laplacian; U is
    the accumulated upper-triangular factor.  Intended for verification on
    small instances only.
    """
    n = chain.n
    _check_size(n)
    u_mat = np.eye(n)
    d_mat = np.zeros((n, n))
    for level in chain.levels:
        l_ff = level.dense_ff()
        l_fc = level.dense_fc()
        block = np.linalg.solve(l_ff, l_fc)
        u_mat[np.ix_(level.f_global, level.c_global)] = block
        d_mat[np.ix_(level.f_global, level.f_global)] = l_ff
    base = dense_laplacian(chain.base_graph)
    d_mat[np.ix_(chain.base_global, chain.base_global)] = base.a
    prod = u_mat.T @ d_mat @ u_mat
    prod = 0.5 * (prod + prod.T)
    return DenseLaplacian(prod, validate=False)
