"""Readers and writers: edge-list text, Matrix Market coordinate, vectors.

Edge-list format: one ``u v w`` triple per line, whitespace separated,
0-based vertex ids, ``#`` starts a comment.  The vertex count is inferred
as max(id) + 1.

Matrix Market: ``coordinate real/integer symmetric`` only, strictly
validated.  Files carrying a Laplacian (diagonal entries present or any
negative value) are converted by negating the off-diagonals; otherwise the
entries are taken as adjacency weights directly.
"""
from __future__ import annotations

import os
from typing import List, Optional

import numpy as np

from .errors import InputError
from .multigraph import WeightedMultiGraph

FLOAT_FMT = "%.17g"  # round-trippable doubles


def _parse_table(lines: List[str], path: str, ncols: int) -> np.ndarray:
    rows = []
    for lineno, raw in lines:
        parts = raw.split()
        if len(parts) != ncols:
            raise InputError(f"{path}:{lineno}: expected {ncols} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    return np.asarray(rows, dtype=np.float64).reshape(len(rows), ncols)


def _data_lines(path: str, comment: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith(comment):
                continue
            yield lineno, line


def _as_vertex_ids(col: np.ndarray, path: str, base: int = 0) -> np.ndarray:
    ids = np.rint(col).astype(np.int64)
    if np.any(np.abs(col - ids) > 0):
        raise InputError(f"{path}: vertex ids must be integers")
    return ids - base


def read_edge_list(path: str) -> WeightedMultiGraph:
    table = _parse_table(list(_data_lines(path, "#")), path, 3)
    if table.shape[0] == 0:
        raise InputError(f"{path}: no edges found")
    us = _as_vertex_ids(table[:, 0], path)
    vs = _as_vertex_ids(table[:, 1], path)
    if us.min() < 0 or vs.min() < 0:
        raise InputError(f"{path}: negative vertex id")
    n = int(max(us.max(), vs.max())) + 1
    return WeightedMultiGraph(n, us, vs, table[:, 2])


def write_edge_list(path: str, g: WeightedMultiGraph,
                    comments: Optional[List[str]] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments or []:
            fh.write(f"# {c}\n")
        for u, v, w in zip(g.us, g.vs, g.ws):
            fh.write(f"{u} {v} {FLOAT_FMT % w}\n")


def read_matrix_market(path: str) -> WeightedMultiGraph:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
    fields = header.lower().split()
    if len(fields) != 5 or fields[0] != "%%matrixmarket":
        raise InputError(f"{path}: missing MatrixMarket header")
    if fields[1] != "matrix" or fields[2] != "coordinate":
        raise InputError(f"{path}: only 'matrix coordinate' files are accepted")
    if fields[3] not in ("real", "integer"):
        raise InputError(f"{path}: unsupported value type {fields[3]!r}")
    if fields[4] != "symmetric":
        raise InputError(f"{path}: only symmetric matrices are accepted")

    lines = list(_data_lines(path, "%"))
    if not lines:
        raise InputError(f"{path}: missing size line")
    size = _parse_table(lines[:1], path, 3)[0]
    nrows, ncols, nnz = (int(x) for x in size)
    if nrows != ncols:
        raise InputError(f"{path}: matrix is {nrows}x{ncols}, expected square")
    entries = _parse_table(lines[1:], path, 3)
    if entries.shape[0] != nnz:
        raise InputError(f"{path}: expected {nnz} entries, found {entries.shape[0]}")
    ii = _as_vertex_ids(entries[:, 0], path, base=1)
    jj = _as_vertex_ids(entries[:, 1], path, base=1)
    vv = entries[:, 2]
    if ii.size == 0:
        raise InputError(f"{path}: matrix has no entries")
    if min(ii.min(), jj.min()) < 0 or max(ii.max(), jj.max()) >= nrows:
        raise InputError(f"{path}: entry index out of range")
    if not np.all(np.isfinite(vv)):
        raise InputError(f"{path}: non-finite value")

    diag = ii == jj
    if np.any(diag) or np.any(vv < 0):
        return _laplacian_entries_to_graph(nrows, ii, jj, vv, path)
    if np.any(vv <= 0):
        raise InputError(f"{path}: adjacency weights must be positive")
    return WeightedMultiGraph(nrows, ii, jj, vv)


def _laplacian_entries_to_graph(n, ii, jj, vv, path) -> WeightedMultiGraph:
    off = ii != jj
    if np.any(vv[off] > 0):
        raise InputError(f"{path}: Laplacian off-diagonals must be nonpositive")
    us, vs, ws = ii[off], jj[off], -vv[off]
    keep = ws > 0  # explicit zeros are allowed and dropped
    g = WeightedMultiGraph(n, us[keep], vs[keep], ws[keep])
    # strict check: the stored diagonal must equal the weighted degrees
    diag = np.zeros(n)
    np.add.at(diag, ii[~off], vv[~off])
    scale = max(1.0, float(np.abs(vv).max()))
    if np.max(np.abs(diag - g.weighted_degrees)) > 1e-8 * scale:
        raise InputError(f"{path}: row sums are not zero, not a Laplacian")
    return g


def read_vector(path: str) -> np.ndarray:
    table = _parse_table(list(_data_lines(path, "#")), path, 1)
    return table[:, 0]


def write_vector(path: str, x: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(x, dtype=np.float64):
            fh.write(f"{FLOAT_FMT % v}\n")


def read_terminals(path: str, n: int) -> np.ndarray:
    table = _parse_table(list(_data_lines(path, "#")), path, 1)
    ids = _as_vertex_ids(table[:, 0], path)
    if ids.size == 0:
        raise InputError(f"{path}: empty terminal set")
    if ids.min() < 0 or ids.max() >= n:
        raise InputError(f"{path}: terminal id out of range [0, {n})")
    return np.unique(ids)


def sniff_format(path: str) -> str:
    """Guess 'matrixmarket' or 'edgelist' from the first line."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if first.lower().startswith("%%matrixmarket"):
        return "matrixmarket"
    return "edgelist"


def read_graph(path: str, fmt: str = "auto") -> WeightedMultiGraph:
    if fmt == "auto":
        fmt = sniff_format(path)
    if fmt == "edgelist":
        return read_edge_list(path)
    if fmt == "matrixmarket":
        return read_matrix_market(path)
    raise InputError(f"unknown graph format {fmt!r}")


def require_file(path: str) -> str:
    if not os.path.exists(path):
        raise InputError(f"file not found: {path}")
    return path
