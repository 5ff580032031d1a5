"""Weighted multigraph with edge-array and incidence views.

The graph is the universal substrate of the solver: vertices are dense
0-based integers, edges are stored as parallel arrays (u, v, w) and may
repeat (parallel multi-edges).  Weights are strictly positive and finite,
self-loops are rejected.  Instances are immutable after construction and
safe for concurrent reads.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .errors import (
    DimensionMismatch,
    InputError,
    NonPositiveWeight,
    SelfLoop,
    VertexOutOfRange,
)

VERTEX_DTYPE = np.int32

EdgeTriple = Tuple[int, int, float]


class WeightedMultiGraph:
    """Immutable weighted multigraph on vertices 0..n-1."""

    __slots__ = ("n", "us", "vs", "ws", "weighted_degrees", "_incidence")

    def __init__(self, n: int, us, vs, ws, *, validate: bool = True):
        n = int(n)
        us = np.ascontiguousarray(us, dtype=VERTEX_DTYPE)
        vs = np.ascontiguousarray(vs, dtype=VERTEX_DTYPE)
        ws = np.ascontiguousarray(ws, dtype=np.float64)
        if not (us.shape == vs.shape == ws.shape) or us.ndim != 1:
            raise InputError("edge arrays must be 1-d and of equal length")
        if validate:
            if n < 1:
                raise InputError(f"vertex count must be >= 1, got {n}")
            if n >= 2 ** 30:  # ids are int32; kernels add endpoint pairs
                raise InputError(f"vertex count {n} above the 2^30 limit")
            if us.size:
                lo = min(us.min(), vs.min())
                hi = max(us.max(), vs.max())
                if lo < 0 or hi >= n:
                    bad = int(np.argmax((us < 0) | (us >= n) | (vs < 0) | (vs >= n)))
                    raise VertexOutOfRange(
                        f"edge {bad} touches vertex outside [0, {n})"
                    )
                if np.any(us == vs):
                    bad = int(np.argmax(us == vs))
                    raise SelfLoop(f"edge {bad} is a self-loop at vertex {int(us[bad])}")
                if not np.all(np.isfinite(ws)) or np.any(ws <= 0.0):
                    bad = int(np.argmax(~np.isfinite(ws) | (ws <= 0.0)))
                    raise NonPositiveWeight(
                        f"edge {bad} has non-positive or non-finite weight {ws[bad]!r}"
                    )
        self.n = n
        self.us = us
        self.vs = vs
        self.ws = ws
        deg = np.bincount(us, weights=ws, minlength=n)
        deg += np.bincount(vs, weights=ws, minlength=n)
        self.weighted_degrees = deg
        self._incidence = None

    # -- views -----------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.us.size)

    @property
    def incidence(self):
        """(offsets, edge-id slots): incident multi-edge ids per vertex.

        Built lazily; each edge appears in both endpoints' slices.
        """
        if self._incidence is None:
            active = np.ones(self.n, dtype=np.uint8)
            off, eids, _ = _kernels.build_incidence(self.us, self.vs, self.ws,
                                                    self.n, active)
            self._incidence = (off, eids)
        return self._incidence

    def incident_edges(self, v: int) -> np.ndarray:
        off, eids = self.incidence
        return eids[off[v]:off[v + 1]]

    def edge_triples(self) -> Iterator[EdgeTriple]:
        for u, v, w in zip(self.us, self.vs, self.ws):
            yield int(u), int(v), float(w)

    def __repr__(self) -> str:  # pragma: no cover
        return f"WeightedMultiGraph(n={self.n}, m={self.m})"


def from_edge_list(n: int, triples: Iterable[EdgeTriple]) -> WeightedMultiGraph:
    """Build a graph from (u, v, w) triples, validating every edge."""
    triples = list(triples)
    if triples:
        us, vs, ws = map(np.asarray, zip(*triples))
    else:
        us = vs = np.empty(0, dtype=VERTEX_DTYPE)
        ws = np.empty(0, dtype=np.float64)
    return WeightedMultiGraph(n, us, vs, ws)


def apply_laplacian(g: WeightedMultiGraph, x: np.ndarray) -> np.ndarray:
    """(D - A) x in O(m); the result sums to zero up to roundoff."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise DimensionMismatch(f"vector has shape {x.shape}, expected ({g.n},)")
    return _kernels.laplacian_apply(g.us, g.vs, g.ws, g.weighted_degrees, x)


def is_connected(g: WeightedMultiGraph) -> bool:
    if g.n == 1:
        return True
    if g.m == 0:
        return False
    a = sp.coo_matrix((g.ws, (g.us, g.vs)), shape=(g.n, g.n))
    ncomp, _ = connected_components(a.tocsr(), directed=False)
    return ncomp == 1


def induced_subgraph(g: WeightedMultiGraph, vertices) -> Tuple[WeightedMultiGraph, np.ndarray]:
    """Subgraph on ``vertices`` plus the remap table (new id -> old id).

    Keeps exactly the multi-edges with both endpoints inside, weights
    unchanged.  New ids follow ascending old-id order.
    """
    ids = np.unique(np.asarray(vertices, dtype=VERTEX_DTYPE))
    if ids.size == 0:
        raise InputError("vertex set must be nonempty")
    if ids[0] < 0 or ids[-1] >= g.n:
        raise VertexOutOfRange("vertex set not contained in the graph")
    pos = np.full(g.n, -1, dtype=VERTEX_DTYPE)
    pos[ids] = np.arange(ids.size, dtype=VERTEX_DTYPE)
    keep = (pos[g.us] >= 0) & (pos[g.vs] >= 0)
    sub = WeightedMultiGraph(ids.size, pos[g.us[keep]], pos[g.vs[keep]],
                             g.ws[keep], validate=False)
    return sub, ids.astype(np.int64)
