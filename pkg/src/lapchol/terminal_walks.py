"""Random-walk sparsification of Schur complements.

Every multi-edge is extended from both endpoints by weighted random walks
until each side hits the terminal set C, and contributes one multi-edge
between the two terminals, weighted by the harmonic sum of the walk's edge
weights.  The expectation of the output Laplacian is exactly the Schur
complement onto C, the edge count never grows, and edges of an
alpha-bounded input stay alpha-bounded.

Randomness is organized as one stream per (seed, stream index, edge id),
so results do not depend on thread count or edge processing order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import InputError, WalkCapExceeded
from .multigraph import VERTEX_DTYPE, WeightedMultiGraph


def default_walk_cap(m: int) -> int:
    """100 (log2 m + 1): far above the whp walk length under a 5-DD interior."""
    return int(100 * (math.log2(max(m, 2)) + 1))


@dataclass
class WalkBatch:
    """One independent walk sample per input edge (parallel arrays).

    ``terminal_u/terminal_v`` are vertex ids of the input graph; a sample
    is discarded when both terminals coincide.  ``inv_weight`` is the sum
    of reciprocal edge weights along the whole walk, so the emitted
    harmonic weight is its reciprocal.
    """

    terminal_u: np.ndarray
    terminal_v: np.ndarray
    inv_weight: np.ndarray
    lengths: np.ndarray
    walked: np.ndarray  # False where both endpoints were already terminals

    @property
    def discarded(self) -> np.ndarray:
        return self.terminal_u == self.terminal_v

    def harmonic_weights(self) -> np.ndarray:
        keep = ~self.discarded
        return np.where(keep, 1.0 / np.where(keep, self.inv_weight, 1.0), 0.0)


@dataclass
class WalkStats:
    edges_in: int
    edges_out: int
    walked: int
    discarded: int
    mean_length: float
    max_length: int


@dataclass
class TerminalWalksResult:
    graph: WeightedMultiGraph  # on the terminals, re-indexed
    c_ids: np.ndarray  # new id -> old id (ascending old order)
    stats: WalkStats


class WalkSampler:
    """Reusable sampling plan for one (graph, terminal set) pair.

    Builds the incidence structure for the interior vertices once; each
    :meth:`sample` call then draws a fresh independent batch of walks.
    """

    def __init__(self, g: WeightedMultiGraph, c: Sequence[int],
                 cap: Optional[int] = None):
        c_ids = np.unique(np.asarray(c, dtype=np.int64))
        if c_ids.size == 0:
            raise InputError("terminal set must be nonempty")
        if c_ids[0] < 0 or c_ids[-1] >= g.n:
            raise InputError("terminal set not contained in the graph")
        in_c = np.zeros(g.n, dtype=np.uint8)
        in_c[c_ids] = 1
        self.g = g
        self.c_ids = c_ids
        self.in_c = in_c
        self.cap = int(cap) if cap is not None else default_walk_cap(g.m)
        self._off, self._eids, self._cum = _kernels.build_incidence(
            g.us, g.vs, g.ws, g.n, 1 - in_c
        )

    def sample(self, seed: int, stream: int = 0) -> WalkBatch:
        g = self.g
        m = g.m
        t1 = np.empty(m, dtype=VERTEX_DTYPE)
        t2 = np.empty(m, dtype=VERTEX_DTYPE)
        inv_sum = np.empty(m, dtype=np.float64)
        lengths = np.empty(m, dtype=np.int64)
        capped = np.empty(m, dtype=np.uint8)
        # below the dispatch-overhead break-even the serial twin is faster;
        # both kernels produce bit-identical output (per-edge streams)
        kernel = (_kernels.walk_kernel_serial if m < 4096
                  else _kernels.walk_kernel)
        kernel(
            g.us, g.vs, g.ws, self.in_c, self._off, self._eids, self._cum,
            np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream & 0xFFFFFFFFFFFFFFFF),
            self.cap, t1, t2, inv_sum, lengths, capped,
        )
        if capped.any():
            bad = int(np.argmax(capped))
            raise WalkCapExceeded(
                f"walk for edge {bad} exceeded {self.cap} steps; the interior "
                f"is far from 5-DD or the graph is disconnected"
            )
        walked = (self.in_c[g.us] & self.in_c[g.vs]) == 0
        return WalkBatch(t1, t2, inv_sum, lengths, walked)


def terminal_walks(g: WeightedMultiGraph, c: Sequence[int], seed: int,
                   cap: Optional[int] = None, stream: int = 0) -> TerminalWalksResult:
    """Sparse unbiased stand-in for the Schur complement onto ``c``.

    Returns the sampled multigraph re-indexed to the terminals (ascending
    original id), the remap table, and walk statistics.  Output edges keep
    the input edge order, so the result is reproducible for a fixed
    (seed, stream) regardless of thread schedule.
    """
    sampler = WalkSampler(g, c, cap)
    batch = sampler.sample(seed, stream)
    keep = ~batch.discarded
    pos = np.full(g.n, -1, dtype=VERTEX_DTYPE)
    pos[sampler.c_ids] = np.arange(sampler.c_ids.size, dtype=VERTEX_DTYPE)
    h = WeightedMultiGraph(
        sampler.c_ids.size,
        pos[batch.terminal_u[keep]],
        pos[batch.terminal_v[keep]],
        1.0 / batch.inv_weight[keep],
        validate=False,
    )
    walked_lengths = batch.lengths[batch.walked]
    stats = WalkStats(
        edges_in=g.m,
        edges_out=h.m,
        walked=int(batch.walked.sum()),
        discarded=int(batch.discarded.sum()),
        mean_length=float(walked_lengths.mean()) if walked_lengths.size else 0.0,
        max_length=int(walked_lengths.max()) if walked_lengths.size else 0,
    )
    return TerminalWalksResult(h, sampler.c_ids, stats)


def walk_weight(g: WeightedMultiGraph, edge_ids: Sequence[int], start: int) -> float:
    """Schur-series weight of a walk (u_0, e_1, ..., e_l, u_l) from ``start``.

    The product of the edge weights divided by the product of the weighted
    degrees of the interior vertices (empty product for single-edge walks).
    The vertex path is recovered by traversal; the edge list alone would be
    ambiguous when a walk re-crosses a multi-edge or its parallel twin.
    Test-support: used to verify the sum-over-walks identity by truncated
    enumeration.
    """
    edge_ids = list(edge_ids)
    if not edge_ids:
        raise InputError("walk must contain at least one edge")
    x = int(start)
    num = 1.0
    den = 1.0
    last = len(edge_ids) - 1
    for i, e in enumerate(edge_ids):
        u, v = int(g.us[e]), int(g.vs[e])
        if x == u:
            x = v
        elif x == v:
            x = u
        else:
            raise InputError(f"edge {e} does not touch vertex {x}")
        num *= g.ws[e]
        if i < last:
            den *= g.weighted_degrees[x]
    return num / den


def enumerate_c_terminal_walks(
    g: WeightedMultiGraph, c: Sequence[int], max_len: int,
    max_walks: int = 5_000_000,
) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """All C-terminal walks with at most ``max_len`` edges, as
    (vertex path, edge ids), starting from every terminal.

    Exponential in general; intended for tiny verification instances.
    """
    c_ids = np.unique(np.asarray(c, dtype=np.int64))
    in_c = np.zeros(g.n, dtype=bool)
    in_c[c_ids] = True
    off, eids = g.incidence
    count = 0
    for start in c_ids:
        stack = [((int(start),), ())]
        while stack:
            path, edges = stack.pop()
            x = path[-1]
            if len(edges) == max_len:
                continue
            for e in eids[off[x]:off[x + 1]]:
                e = int(e)
                y = int(g.us[e]) + int(g.vs[e]) - x
                if in_c[y]:
                    count += 1
                    if count > max_walks:
                        raise InputError(f"walk enumeration exceeded {max_walks}")
                    yield path + (y,), edges + (e,)
                else:
                    stack.append((path + (y,), edges + (e,)))
