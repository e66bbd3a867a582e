"""Edge-adjacency matrix and its degree- and weight-scaled variants.

Two edges are adjacent when they share exactly one endpoint (the line-graph
relation).  The plain 0/1 matrix is not unique across graphs, so the model
consumes two reweighted variants instead: entries divided by the degree of
the shared node, and entries divided by the mean weight of the two edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "EdgeAdjacency",
    "ModifiedEdgeAdjacency",
    "edge_adjacency",
    "degree_scaled_adjacency",
    "weight_scaled_adjacency",
    "binary_adjacency",
    "save_coo_text",
]

WEIGHT_EPS = 1e-12  # clamp for near-zero mean incident weight


def _csr_parts(dim, rows, cols, vals):
    indptr = np.zeros(dim + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=dim), out=indptr[1:])
    return indptr, cols, vals


@dataclass
class EdgeAdjacency:
    """Sparse symmetric 0/1 edge-adjacency matrix.

    Entries are stored in both directions, sorted row-major; entry k links
    edges ``rows[k]`` and ``cols[k]`` through node ``shared_node[k]``.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    shared_node: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    @property
    def vals(self) -> np.ndarray:
        return np.ones(self.nnz)

    def toarray(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        a[self.rows, self.cols] = 1.0
        return a

    def csr(self):
        return _csr_parts(self.dim, self.rows, self.cols, self.vals)


@dataclass
class ModifiedEdgeAdjacency:
    """Reweighted edge adjacency; same sparsity pattern, positive entries."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    variant: str = field(default="degree")  # "degree" | "weight" | "binary"

    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    def toarray(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        a[self.rows, self.cols] = self.vals
        return a

    def csr(self):
        return _csr_parts(self.dim, self.rows, self.cols, self.vals)


def edge_adjacency(g) -> EdgeAdjacency:
    """0/1 adjacency over edges: 1 iff two distinct edges share a node.

    Each unordered adjacent pair is generated exactly once (at its unique
    shared node, since the graph is simple) and mirrored, so the matrix is
    symmetric by construction with a zero diagonal.
    """
    m = g.num_edges
    rows, cols, shared = [], [], []
    indptr, adj_edge = g.indptr, g.adj_edge
    for x in range(g.node_count):
        inc = adj_edge[indptr[x]:indptr[x + 1]]
        k = inc.size
        if k < 2:
            continue
        ii, jj = np.triu_indices(k, 1)
        ei, ej = inc[ii], inc[jj]
        rows.append(ei)
        cols.append(ej)
        rows.append(ej)
        cols.append(ei)
        shared.append(np.full(2 * ei.size, x, dtype=np.int64))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        s = np.concatenate(shared)
    else:
        r = c = s = np.zeros(0, dtype=np.int64)
    order = np.lexsort((c, r))
    return EdgeAdjacency(dim=m, rows=r[order], cols=c[order], shared_node=s[order])


def _check_consistent(g, a: EdgeAdjacency) -> None:
    if a.dim != g.num_edges:
        raise ValueError(
            f"adjacency dim {a.dim} does not match graph edge count {g.num_edges}"
        )
    if a.nnz and (a.shared_node.max() >= g.node_count):
        raise ValueError("adjacency references nodes outside the graph")


def degree_scaled_adjacency(g, a: EdgeAdjacency) -> ModifiedEdgeAdjacency:
    """Entries 1 / degree(shared node); degree is the neighbor count."""
    _check_consistent(g, a)
    deg = (g.indptr[1:] - g.indptr[:-1]).astype(np.float64)
    vals = 1.0 / deg[a.shared_node]
    return ModifiedEdgeAdjacency(
        dim=a.dim, rows=a.rows.copy(), cols=a.cols.copy(), vals=vals,
        variant="degree",
    )


def weight_scaled_adjacency(g, a: EdgeAdjacency) -> ModifiedEdgeAdjacency:
    """Entries 1 / max(mean incident edge weight, eps)."""
    _check_consistent(g, a)
    w = g.weight
    mean_w = (w[a.rows] + w[a.cols]) / 2.0
    vals = 1.0 / np.maximum(mean_w, WEIGHT_EPS)
    return ModifiedEdgeAdjacency(
        dim=a.dim, rows=a.rows.copy(), cols=a.cols.copy(), vals=vals,
        variant="weight",
    )


def binary_adjacency(a: EdgeAdjacency) -> ModifiedEdgeAdjacency:
    """The unmodified 0/1 matrix in the reweighted container (for ablations)."""
    return ModifiedEdgeAdjacency(
        dim=a.dim, rows=a.rows.copy(), cols=a.cols.copy(),
        vals=np.ones(a.nnz), variant="binary",
    )


def save_coo_text(mat, path) -> None:
    """Debug dump: one "i j value" line per stored entry."""
    with Path(path).open("w") as fh:
        for i, j, v in zip(mat.rows, mat.cols, mat.vals):
            fh.write(f"{i} {j} {v:.17g}\n")
