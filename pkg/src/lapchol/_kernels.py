"""Compiled kernels: incidence building, random walks, edge-wise reductions.

All reductions here accumulate sequentially in a fixed order, and the walk
kernel derives one RNG stream per edge from (seed, stream, edge id), so every
result is bit-reproducible regardless of thread count or scheduling.  Only
the walk kernel runs multi-threaded; each edge writes to its own output slot.
"""
from __future__ import annotations

import numba as nb
import numpy as np

# prefer omp/workqueue: outdated TBB runtimes disable themselves noisily
if hasattr(nb.config, "THREADING_LAYER_PRIORITY"):
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

U64 = np.uint64
_GAMMA = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


@nb.njit(nb.uint64(nb.uint64), cache=True, inline="always")
def _finalize(z):
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


@nb.njit(nb.uint64(nb.uint64, nb.uint64, nb.uint64), cache=True, inline="always")
def _stream_state(seed, stream, eid):
    # splitmix64 finalizer chained over the three key parts
    z = _finalize(seed + _GAMMA)
    z = _finalize(z ^ (stream * _MIX1 + U64(1)))
    return _finalize(z ^ (eid * _MIX2 + U64(1)))


@nb.njit(cache=True)
def build_incidence(us, vs, ws, n, active):
    """Slot-based incidence for the vertices flagged in ``active``.

    Returns (offsets, slot edge ids, slice-local cumulative weights).  Slots
    of inactive vertices are absent; their slices are empty.
    """
    m = us.shape[0]
    off = np.zeros(n + 1, dtype=np.int64)
    for e in range(m):
        if active[us[e]] != 0:
            off[us[e] + 1] += 1
        if active[vs[e]] != 0:
            off[vs[e] + 1] += 1
    for v in range(n):
        off[v + 1] += off[v]
    eids = np.empty(off[n], dtype=np.int64)
    cur = off[:n].copy()
    for e in range(m):
        u = us[e]
        v = vs[e]
        if active[u] != 0:
            eids[cur[u]] = e
            cur[u] += 1
        if active[v] != 0:
            eids[cur[v]] = e
            cur[v] += 1
    cum = np.empty(off[n], dtype=np.float64)
    for v in range(n):
        acc = 0.0
        for s in range(off[v], off[v + 1]):
            acc += ws[eids[s]]
            cum[s] = acc
    return off, eids, cum


@nb.njit(cache=True, inline="always")
def _walk_one_edge(e, us, vs, ws, in_c, off, eids, cum, seed, stream, cap,
                   t1, t2, inv_sum, lengths, capped):
    u = us[e]
    v = vs[e]
    capped[e] = 0
    if in_c[u] != 0 and in_c[v] != 0:
        t1[e] = u
        t2[e] = v
        inv_sum[e] = 1.0 / ws[e]
        lengths[e] = 0
        return
    state = _stream_state(seed, stream, U64(e))
    inv = 1.0 / ws[e]
    steps = 0
    bad = False
    for side in range(2):
        x = u if side == 0 else v
        while in_c[x] == 0:
            lo = off[x]
            hi = off[x + 1]
            if lo >= hi or steps >= cap:
                bad = True
                break
            state += _GAMMA
            z = _finalize(state)
            # r lies in (0, total]; the last slot holds the slice total
            r = (1.0 - (z >> U64(11)) * _INV_2_53) * cum[hi - 1]
            while lo < hi:
                mid = (lo + hi) >> 1
                if cum[mid] >= r:
                    hi = mid
                else:
                    lo = mid + 1
            eid = eids[lo]
            inv += 1.0 / ws[eid]
            x = us[eid] + vs[eid] - x
            steps += 1
        if bad:
            break
        if side == 0:
            t1[e] = x
        else:
            t2[e] = x
    if bad:
        capped[e] = 1
        t1[e] = -1
        t2[e] = -1
        inv_sum[e] = 0.0
        lengths[e] = steps
    else:
        inv_sum[e] = inv
        lengths[e] = steps


@nb.njit(cache=True, parallel=True)
def walk_kernel(us, vs, ws, in_c, off, eids, cum, seed, stream, cap,
                t1, t2, inv_sum, lengths, capped):
    """Extend every edge to a pair of terminals in C by weighted random walks.

    For edge e with both endpoints already in C the edge passes through
    unchanged.  Otherwise each endpoint walks, stepping to an incident edge
    with probability proportional to its weight, until it enters C.
    ``inv_sum`` collects the sum of reciprocal weights along the whole walk
    (the reciprocal of the emitted harmonic weight); ``lengths`` counts the
    steps taken beyond the seed edge itself.
    """
    for e in nb.prange(us.shape[0]):
        _walk_one_edge(e, us, vs, ws, in_c, off, eids, cum, seed, stream, cap,
                       t1, t2, inv_sum, lengths, capped)


@nb.njit(cache=True)
def walk_kernel_serial(us, vs, ws, in_c, off, eids, cum, seed, stream, cap,
                       t1, t2, inv_sum, lengths, capped):
    """Single-threaded twin of :func:`walk_kernel`; bit-identical results.

    Worth using below a few thousand edges, where the parallel dispatch
    overhead dominates the walking itself.
    """
    for e in range(us.shape[0]):
        _walk_one_edge(e, us, vs, ws, in_c, off, eids, cum, seed, stream, cap,
                       t1, t2, inv_sum, lengths, capped)


@nb.njit(cache=True)
def laplacian_apply(us, vs, ws, deg, x):
    """(D - A) x for the multigraph given as parallel edge arrays."""
    y = deg * x
    for i in range(us.shape[0]):
        w = ws[i]
        y[us[i]] -= w * x[vs[i]]
        y[vs[i]] -= w * x[us[i]]
    return y


@nb.njit(cache=True)
def scatter_weighted(dst, src, w, x, out_size):
    """out[dst[i]] += w[i] * x[src[i]], accumulated in index order."""
    out = np.zeros(out_size, dtype=np.float64)
    for i in range(dst.shape[0]):
        out[dst[i]] += w[i] * x[src[i]]
    return out


@nb.njit(cache=True)
def spanning_tree_edges(us, vs, n):
    """Edge ids of a spanning forest, picked greedily by union-find."""
    parent = np.arange(n, dtype=np.int64)
    picked = np.empty(n - 1 if n > 0 else 0, dtype=np.int64)
    k = 0
    for e in range(us.shape[0]):
        ru = us[e]
        while parent[ru] != ru:
            parent[ru] = parent[parent[ru]]
            ru = parent[ru]
        rv = vs[e]
        while parent[rv] != rv:
            parent[rv] = parent[parent[rv]]
            rv = parent[rv]
        if ru != rv:
            parent[ru] = rv
            picked[k] = e
            k += 1
            if k == n - 1:
                break
    return picked[:k]
