"""Small graph generators for demos and tests: paths, grids, random graphs."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import InputError
from .multigraph import WeightedMultiGraph


def path_graph(n: int, weight: float = 1.0) -> WeightedMultiGraph:
    if n < 2:
        raise InputError("path needs at least 2 vertices")
    us = np.arange(n - 1)
    return WeightedMultiGraph(n, us, us + 1, np.full(n - 1, weight))


def grid_graph(rows: int, cols: int, weight: float = 1.0) -> WeightedMultiGraph:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InputError("grid needs at least 2 vertices")
    idx = np.arange(rows * cols).reshape(rows, cols)
    horiz = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    us, vs = np.concatenate([horiz, vert], axis=1)
    return WeightedMultiGraph(rows * cols, us, vs, np.full(us.size, weight))


def random_regular_graph(n: int, degree: int, rng: np.random.Generator,
                         max_tries: int = 1000) -> WeightedMultiGraph:
    """Simple d-regular graph by the configuration model with rejection."""
    if n * degree % 2 != 0:
        raise InputError("n * degree must be even")
    if degree >= n:
        raise InputError("degree must be below n")
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        us, vs = perm[0::2], perm[1::2]
        if np.any(us == vs):
            continue
        lo, hi = np.minimum(us, vs), np.maximum(us, vs)
        keys = lo.astype(np.int64) * n + hi
        if np.unique(keys).size != keys.size:
            continue
        g = WeightedMultiGraph(n, us, vs, np.ones(us.size))
        from .multigraph import is_connected

        if is_connected(g):
            return g
    raise InputError(f"failed to draw a connected {degree}-regular graph on {n} vertices")


def random_connected_graph(n: int, extra_edges: int, rng: np.random.Generator,
                           weight_range: Optional[tuple] = (0.5, 2.0)) -> WeightedMultiGraph:
    """Random spanning tree plus ``extra_edges`` distinct random edges.

    Connected by construction; simple (no parallel edges).
    """
    if n < 2:
        raise InputError("need at least 2 vertices")
    # random attachment tree: vertex i joins a uniformly random earlier vertex
    order = rng.permutation(n)
    attach = np.array([rng.integers(0, i) for i in range(1, n)])
    t_us, t_vs = order[1:], order[attach]
    keys = {_key(u, v, n) for u, v in zip(t_us, t_vs)}
    us, vs = list(t_us), list(t_vs)
    budget = min(extra_edges, n * (n - 1) // 2 - (n - 1))
    while budget > 0:
        u, v = rng.integers(0, n, size=2)
        if u == v or _key(u, v, n) in keys:
            continue
        keys.add(_key(u, v, n))
        us.append(u)
        vs.append(v)
        budget -= 1
    m = len(us)
    if weight_range is None:
        ws = np.ones(m)
    else:
        ws = rng.uniform(weight_range[0], weight_range[1], size=m)
    return WeightedMultiGraph(n, np.asarray(us), np.asarray(vs), ws)


def _key(u, v, n) -> int:
    u, v = (int(u), int(v)) if u < v else (int(v), int(u))
    return u * n + v
