"""lapchol: randomized block Cholesky solver for graph Laplacian systems.

The pipeline: split edges until every multi-edge has small leverage,
eliminate 5-DD vertex sets level by level with random-walk Schur
sparsification, solve interior blocks by a truncated Jacobi series, and
wrap everything in a preconditioned Richardson iteration.  A dense exact
oracle backs the tests and the base case.
"""
from . import errors
from .alpha_bound import (
    BoundingConfig,
    estimate_leverage_overestimates,
    split_by_estimates,
    split_naive,
)
from .chain import FactorizationChain, apply_chain, build_chain
from .dd_subset import DDSubsetResult, five_dd_subset, is_five_dd
from .exact_oracle import (
    DenseLaplacian,
    assemble_chain_matrix,
    dense_laplacian,
    dense_schur,
    leverage_score,
    leverage_scores,
    pinv_solve,
    relative_spectral_error,
)
from .graph_io import read_edge_list, read_graph, read_matrix_market, write_edge_list
from .jacobi import JacobiOperator, apply_jacobi, build_jacobi, jacobi_iterations
from .multigraph import (
    WeightedMultiGraph,
    apply_laplacian,
    from_edge_list,
    induced_subgraph,
    is_connected,
)
from .richardson import (
    SolverConfig,
    SolveReport,
    alpha_inverse_for,
    precon_richardson,
    richardson_iterations,
    solve,
)
from .runtime import set_threads
from .schur_approx import SchurConfig, approx_schur, schur_alpha_inverse
from .terminal_walks import WalkSampler, terminal_walks, walk_weight

__version__ = "0.1.0"

__all__ = [
    "BoundingConfig",
    "DDSubsetResult",
    "DenseLaplacian",
    "FactorizationChain",
    "JacobiOperator",
    "SchurConfig",
    "SolveReport",
    "SolverConfig",
    "WalkSampler",
    "WeightedMultiGraph",
    "alpha_inverse_for",
    "apply_chain",
    "apply_jacobi",
    "apply_laplacian",
    "approx_schur",
    "assemble_chain_matrix",
    "build_chain",
    "build_jacobi",
    "dense_laplacian",
    "dense_schur",
    "errors",
    "estimate_leverage_overestimates",
    "five_dd_subset",
    "from_edge_list",
    "induced_subgraph",
    "is_connected",
    "is_five_dd",
    "jacobi_iterations",
    "leverage_score",
    "leverage_scores",
    "pinv_solve",
    "precon_richardson",
    "read_edge_list",
    "read_graph",
    "read_matrix_market",
    "relative_spectral_error",
    "richardson_iterations",
    "schur_alpha_inverse",
    "set_threads",
    "solve",
    "split_by_estimates",
    "split_naive",
    "terminal_walks",
    "walk_weight",
    "write_edge_list",
]
