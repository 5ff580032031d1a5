import numpy as np
import pytest

import lapchol as lc
from lapchol.generators import random_connected_graph


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile every numba kernel up front so timed tests measure the math
    g = lc.from_edge_list(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 1.0)])
    lc.apply_laplacian(g, np.zeros(4))
    lc.terminal_walks(g, [0, 3], seed=0)
    chain = lc.build_chain(g, lc.SolverConfig(seed=0))
    lc.apply_chain(chain, np.array([1.0, -1.0, 1.0, -1.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def brute_laplacian(g):
    """Dense Laplacian built by plain loops; independent of the package."""
    a = np.zeros((g.n, g.n))
    for u, v, w in zip(g.us, g.vs, g.ws):
        a[u, u] += w
        a[v, v] += w
        a[u, v] -= w
        a[v, u] -= w
    return a


def l_norm(g, v):
    return float(np.sqrt(max(v @ lc.apply_laplacian(g, v), 0.0)))


@pytest.fixture
def small_graphs(rng):
    """A varied bag of small connected graphs for property checks."""
    out = []
    for i, (n, extra) in enumerate([(12, 10), (30, 45), (50, 20), (80, 160)]):
        out.append(random_connected_graph(n, extra, np.random.default_rng(100 + i)))
    return out
