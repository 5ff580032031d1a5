import numpy as np
import pytest

import lapchol as lc
from lapchol.alpha_bound import BoundingConfig, split_naive
from lapchol.errors import InputError
from lapchol.generators import random_connected_graph
from lapchol.schur_approx import SchurConfig, approx_schur, schur_alpha_inverse


def bounded(g, eps):
    ai = schur_alpha_inverse(g.n, eps)
    return split_naive(g, BoundingConfig(alpha_inverse=ai))


def test_single_vertex_elimination():
    g = lc.from_edge_list(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    res = approx_schur(g, [0, 1, 2], SchurConfig(epsilon=0.4, seed=0))
    assert res.levels == 1  # a single vertex is always 5-DD
    assert res.c_ids.tolist() == [0, 1, 2]
    assert res.graph.n == 3
    assert res.graph.m <= g.m


def test_triangle_quality():
    g = lc.from_edge_list(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    eps = 0.3
    h = bounded(g, eps)
    exact = lc.dense_schur(lc.dense_laplacian(g), [1, 2])
    err = None
    for attempt in range(3):
        res = approx_schur(h, [1, 2], SchurConfig(epsilon=eps, seed=attempt))
        err = lc.relative_spectral_error(lc.dense_laplacian(res.graph), exact)
        if err <= eps:
            break
    assert err <= eps


def test_medium_instance_quality(rng):
    n = 200
    g = random_connected_graph(n, 500, rng)
    eps = 0.25
    h = bounded(g, eps)
    c = np.sort(rng.choice(n, size=40, replace=False))
    exact = lc.dense_schur(lc.dense_laplacian(g), c)
    err = None
    for attempt in range(3):
        res = approx_schur(h, c, SchurConfig(epsilon=eps, seed=10 + attempt))
        err = lc.relative_spectral_error(lc.dense_laplacian(res.graph), exact)
        if err <= eps:
            break
    assert err <= eps
    assert res.graph.m <= h.m
    s = n - c.size
    assert res.levels <= np.log(s) / np.log(40 / 39) + 1
    # 5-DD sets taken from induced interiors still give short walks
    walked = sum(st.walked for st in res.stats)
    pooled = sum(st.mean_walk_length * st.walked for st in res.stats) / walked
    assert pooled <= 2.5
    assert max(st.max_walk_length for st in res.stats) <= 20 * np.log2(h.m)


def test_vertex_set_is_exactly_c(rng):
    n = 80
    g = random_connected_graph(n, 200, rng)
    c = np.array([3, 17, 41, 42, 79])
    res = approx_schur(g, c, SchurConfig(epsilon=0.4, seed=2))
    assert np.array_equal(res.c_ids, c)
    assert res.graph.n == c.size
    # output edges live between terminal positions
    assert res.graph.us.max(initial=0) < c.size


def test_expected_weight_sanity(rng):
    # one eliminated path vertex: expected terminal edge weight is the
    # series resistance; average over independent runs approaches it
    g = lc.from_edge_list(3, [(0, 1, 1.0), (1, 2, 1.0)])
    tot = 0.0
    runs = 3000
    for s in range(runs):
        res = approx_schur(g, [0, 2], SchurConfig(epsilon=0.4, seed=s))
        tot += sum(res.graph.ws)
    assert tot / runs == pytest.approx(0.5, rel=0.1)


def test_disconnected_interiors_handled():
    # eliminating two far-apart vertices: the induced interior has no edges
    g = lc.from_edge_list(6, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0),
                              (3, 4, 1.0), (4, 5, 1.0), (0, 5, 1.0)])
    res = approx_schur(g, [0, 2, 3, 5], SchurConfig(epsilon=0.4, seed=1))
    assert res.graph.n == 4
    assert res.graph.m <= g.m


def test_bad_terminal_sets():
    g = lc.from_edge_list(3, [(0, 1, 1.0), (1, 2, 1.0)])
    with pytest.raises(InputError):
        approx_schur(g, [], SchurConfig(epsilon=0.3))
    with pytest.raises(InputError):
        approx_schur(g, [0, 1, 2], SchurConfig(epsilon=0.3))
    with pytest.raises(InputError):
        SchurConfig(epsilon=0.6)


def test_alpha_formula():
    n, eps = 400, 0.25
    assert schur_alpha_inverse(n, eps) == int(np.ceil(eps ** -2 * np.log(n) ** 2))
