import numpy as np
import pytest

import lapchol as lc
from lapchol.errors import Disconnected, InputError
from lapchol.generators import random_connected_graph
from lapchol.richardson import (
    SolverConfig,
    alpha_inverse_for,
    precon_richardson,
    richardson_iterations,
    solve,
)

from conftest import l_norm


def test_iteration_count_formula():
    assert richardson_iterations(1.0, 1e-8) == 137
    assert richardson_iterations(1.0, 1e-4) == int(np.ceil(np.exp(2) * np.log(1e4)))
    assert richardson_iterations(0.5, 1e-4) == int(np.ceil(np.e * np.log(1e4)))


def test_exact_preconditioner_is_fixed_point(rng):
    g = random_connected_graph(40, 90, rng)
    l = lc.dense_laplacian(g)
    p = l.pinv()
    b = rng.standard_normal(40)
    b -= b.mean()
    x = precon_richardson(lambda v: l.a @ v, lambda v: p @ v, b,
                          delta=1e-12, epsilon=1e-4)
    exact = p @ b
    assert np.linalg.norm(x - exact) <= 1e-12 * np.linalg.norm(exact)


def test_chain_preconditioner_reaches_epsilon(rng):
    n = 100
    g = random_connected_graph(n, 260, rng)
    from lapchol.alpha_bound import BoundingConfig, split_naive

    h = split_naive(g, BoundingConfig(alpha_inverse=alpha_inverse_for(n)))
    chain = lc.build_chain(h, SolverConfig(seed=2))
    l = lc.dense_laplacian(g)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = l.a @ x_true
    eps = 1e-6
    x = precon_richardson(lambda v: lc.apply_laplacian(g, v),
                          lambda v: lc.apply_chain(chain, v), b, 1.0, eps)
    assert l_norm(g, x - x_true) <= eps * l_norm(g, x_true)


def test_error_contraction_monotone(rng):
    n = 80
    g = random_connected_graph(n, 200, rng)
    from lapchol.alpha_bound import BoundingConfig, split_naive

    h = split_naive(g, BoundingConfig(alpha_inverse=alpha_inverse_for(n)))
    chain = lc.build_chain(h, SolverConfig(seed=1))
    l = lc.dense_laplacian(g)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = l.a @ x_true
    errs = []
    precon_richardson(
        lambda v: lc.apply_laplacian(g, v), lambda v: lc.apply_chain(chain, v),
        b, 1.0, 1e-6, callback=lambda k, x: errs.append(l_norm(g, x - x_true)),
    )
    floor = 1e-13 * l_norm(g, x_true)
    for prev, cur in zip(errs, errs[1:]):
        assert cur <= prev * (1 + 1e-12) + floor


def test_solve_trivial_cases():
    g = lc.from_edge_list(2, [(0, 1, 1.0)])
    x, report = solve(g, np.zeros(2), SolverConfig(epsilon=1e-6, seed=0))
    assert np.allclose(x, 0.0) and report.iterations == 0
    x, report = solve(g, np.array([1.0, -1.0]), SolverConfig(epsilon=1e-6, seed=0))
    assert np.allclose(x, [0.5, -0.5], atol=1e-6)
    assert report.iterations == richardson_iterations(1.0, 1e-6)
    assert report.residual_norm <= 1e-6


def test_solve_matches_oracle(rng):
    n = 180
    g = random_connected_graph(n, 500, rng)
    l = lc.dense_laplacian(g)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = l.a @ x_true
    eps = 1e-8
    x, report = solve(g, b, SolverConfig(epsilon=eps, seed=5))
    assert l_norm(g, x - x_true) <= eps * l_norm(g, x_true)
    assert report.iterations == richardson_iterations(1.0, eps)
    assert report.levels == len([s for s in report.chain_lines if s[:1].isdigit()])


def test_solve_estimate_mode(rng):
    n = 120
    g = random_connected_graph(n, 400, rng)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = lc.apply_laplacian(g, x_true)
    cfg = SolverConfig(epsilon=1e-6, seed=7, bounding_mode="estimate",
                       subsample_factor=2, jl_rows=64)
    x, report = solve(g, b, cfg)
    assert l_norm(g, x - x_true) <= 1e-6 * l_norm(g, x_true)
    assert report.bounding_mode == "estimate"


def test_solve_projects_rhs(rng):
    g = random_connected_graph(50, 120, rng)
    b = rng.standard_normal(50) + 2.0
    x, report = solve(g, b, SolverConfig(epsilon=1e-6, seed=1))
    assert report.projection_magnitude == pytest.approx(
        abs(b.sum()) / np.sqrt(50), rel=1e-12
    )
    x2, _ = solve(g, b - b.mean(), SolverConfig(epsilon=1e-6, seed=1))
    assert np.allclose(x, x2)


def test_solve_self_consistency_across_seeds(rng):
    n = 90
    g = random_connected_graph(n, 220, rng)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = lc.apply_laplacian(g, x_true)
    eps = 1e-7
    xa, _ = solve(g, b, SolverConfig(epsilon=eps, seed=11))
    xb, _ = solve(g, b, SolverConfig(epsilon=eps, seed=222))
    assert l_norm(g, xa - xb) <= 2 * eps * l_norm(g, x_true)


def test_solve_extreme_weight_range(rng):
    # twelve orders of magnitude of edge weights: the leverage-based split
    # keeps the chain well conditioned regardless of scale
    n = 250
    base = random_connected_graph(n, 3 * n, rng, weight_range=None)
    ws = 10.0 ** rng.uniform(-6, 6, base.m)
    g = lc.WeightedMultiGraph(n, base.us, base.vs, ws)
    x_true = rng.standard_normal(n)
    x_true -= x_true.mean()
    b = lc.apply_laplacian(g, x_true)
    eps = 1e-8
    x, _ = solve(g, b, SolverConfig(epsilon=eps, seed=2))
    assert l_norm(g, x - x_true) <= eps * l_norm(g, x_true)


def test_solve_rejects_bad_input():
    dis = lc.from_edge_list(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(Disconnected):
        solve(dis, np.zeros(4), SolverConfig(epsilon=1e-4))
    g = lc.from_edge_list(2, [(0, 1, 1.0)])
    with pytest.raises(InputError):
        solve(g, np.zeros(3), SolverConfig(epsilon=1e-4))


def test_config_validation():
    with pytest.raises(InputError):
        SolverConfig(epsilon=0.7)
    with pytest.raises(InputError):
        SolverConfig(epsilon=0.0)
    with pytest.raises(InputError):
        SolverConfig(epsilon=1e-4, delta=-1.0)
    with pytest.raises(InputError):
        SolverConfig(epsilon=1e-4, bounding_mode="something")


def test_alpha_inverse_default():
    assert alpha_inverse_for(2) >= 1
    n = 1000
    assert alpha_inverse_for(n) == int(np.ceil(np.log(n) ** 2))
    assert alpha_inverse_for(n, 0.5) == int(np.ceil(0.5 * np.log(n) ** 2))
