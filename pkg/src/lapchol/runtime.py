"""Thread-budget control for the compiled kernels.

Results are bit-identical across thread counts by construction (per-edge
RNG streams, fixed-order reductions), so the budget only affects speed.
"""
from __future__ import annotations

from typing import Optional

import numba


def set_threads(count: Optional[int]) -> int:
    """Cap the worker pool; returns the count actually in effect."""
    limit = numba.config.NUMBA_NUM_THREADS
    if count is None or count <= 0:
        return numba.get_num_threads()
    numba.set_num_threads(max(1, min(count, limit)))
    return numba.get_num_threads()
