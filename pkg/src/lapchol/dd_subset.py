"""Sampling of 5-diagonally-dominant vertex subsets.

A set F is 5-DD when, for every vertex i in F, the weight of its edges
inside the induced subgraph G[F] is at most one fifth of its total
weighted degree.  Such sets behave like almost-independent sets: random
walks leave them quickly and their Laplacian block is cheap to invert
approximately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalError
from .multigraph import WeightedMultiGraph

# the candidate filter keeps vertices with interior weight <= RATIO * degree
RATIO = 0.2


@dataclass(frozen=True)
class DDSubsetResult:
    f: np.ndarray  # sorted vertex ids
    rounds_used: int


def five_dd_subset(g: WeightedMultiGraph, rng: np.random.Generator) -> DDSubsetResult:
    """Sample a 5-DD subset of size > n/40 (or >= 1 when n <= 40).

    Repeatedly draws a uniform candidate set of size n/20 and keeps the
    vertices whose interior weight within the candidate set stays below a
    fifth of their degree; the survivors are 5-DD a fortiori.  Each round
    succeeds with constant probability, so the loop is short; a generous
    round cap guards against misuse.
    """
    n = g.n
    if n == 1:
        return DDSubsetResult(np.zeros(1, dtype=np.int64), 0)
    size = max(1, n // 20)
    need = n / 40.0 if n > 40 else 0.0  # accept any nonempty survivor set below 41
    cap = 64 * max(1, math.ceil(math.log2(n + 1)))
    deg = g.weighted_degrees
    for rounds in range(1, cap + 1):
        cand = rng.choice(n, size=size, replace=False)
        mask = np.zeros(n, dtype=bool)
        mask[cand] = True
        inside = mask[g.us] & mask[g.vs]
        interior = np.bincount(g.us[inside], weights=g.ws[inside], minlength=n)
        interior += np.bincount(g.vs[inside], weights=g.ws[inside], minlength=n)
        survivors = cand[interior[cand] <= RATIO * deg[cand]]
        if survivors.size > need and survivors.size >= 1:
            return DDSubsetResult(np.sort(survivors).astype(np.int64), rounds)
    raise InternalError(f"5-DD sampling did not converge in {cap} rounds (n={n})")


def is_five_dd(g: WeightedMultiGraph, f) -> bool:
    """Direct recheck of the 5-DD row condition via the incidence view.

    Independent of the sampler: walks each vertex's incident slice and
    compares interior weight against a fifth of the slice total.  A 1e-12
    relative slack absorbs summation-order roundoff.
    """
    f = np.asarray(f, dtype=np.int64)
    in_f = np.zeros(g.n, dtype=bool)
    in_f[f] = True
    off, eids = g.incidence
    for i in f:
        ids = eids[off[i]:off[i + 1]]
        if ids.size == 0:
            continue
        w = g.ws[ids]
        others = g.us[ids] + g.vs[ids] - i
        total = w.sum()
        interior = w[in_f[others]].sum()
        if interior > RATIO * total * (1.0 + 1e-12):
            return False
    return True
