"""Exact edge betweenness centrality.

Two independent routes are provided: :func:`edge_betweenness` is the
production path (weighted single-source shortest-path trees from every
source plus dependency accumulation) and :func:`edge_betweenness_exhaustive`
is a deliberately naive cross-check that computes all-pairs distances with
Floyd-Warshall and literally enumerates every minimum-weight path.

Both sum the per-edge fraction of shortest paths over *unordered* node
pairs {s, t}, s != t, with no normalization; pairs with no connecting path
contribute zero.  Only the ranking is consumed downstream, so any global
positive scaling convention would do; this one is fixed and documented
here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from heapq import heappush, heappop
from pathlib import Path

import numpy as np

__all__ = [
    "EbcScores",
    "edge_betweenness",
    "edge_betweenness_exhaustive",
    "ranking_from_scores",
    "save_scores_text",
    "load_scores_text",
    "save_scores_json",
    "load_scores_json",
]

# relative tolerance for "same shortest-path length" when building the DAG;
# uniform random weights make exact ties measure-zero, but file-loaded
# graphs can contain them and float sums of equal weights may differ in the
# last ulp depending on summation order
REL_TOL = 1e-12

# per-source contributions are summed in fixed-size chunks so the reduction
# order (and therefore the float result) does not depend on worker count
_CHUNK = 64


def _close(a: float, b: float) -> bool:
    if a == b:
        return True
    diff = abs(a - b)
    # an infinite difference means "one side unreachable", never a tie
    return diff <= REL_TOL * max(abs(a), abs(b)) and diff != float("inf")


@dataclass
class EbcScores:
    """Per-edge betweenness values, indexed by edge id."""

    values: np.ndarray
    pair_convention: str = field(default="unordered-pairs")

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("scores must be a 1-d vector")


def _source_dependencies(n, m, indptr, nbr, eid, wts, s: int) -> list[float]:
    """One source's contribution to every edge's betweenness.

    Dijkstra with lazy deletion; predecessor lists carry the incident edge
    id so the accumulation never needs an endpoint lookup.  Plain Python
    lists throughout: this is the hot loop of the whole label generator.
    """
    inf = float("inf")
    tol = REL_TOL
    dist = [inf] * n
    sigma = [0.0] * n
    done = [False] * n
    preds: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    order: list[int] = []

    dist[s] = 0.0
    sigma[s] = 1.0
    heap: list[tuple[float, int]] = [(0.0, s)]
    while heap:
        d, v = heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        sv = sigma[v]
        for k in range(indptr[v], indptr[v + 1]):
            u = nbr[k]
            if done[u]:
                continue
            nd = d + wts[k]
            du = dist[u]
            if du != inf:
                diff = nd - du if nd > du else du - nd
                if diff <= tol * (nd if nd > du else du):
                    sigma[u] += sv
                    preds[u].append((v, eid[k]))
                    continue
            if nd < du:
                dist[u] = nd
                sigma[u] = sv
                preds[u] = [(v, eid[k])]
                heappush(heap, (nd, u))

    contrib = [0.0] * m
    delta = [0.0] * n
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v, e in preds[w]:
            c = sigma[v] * coeff
            contrib[e] += c
            delta[v] += c
    return contrib


def edge_betweenness(g, workers: int = 1) -> EbcScores:
    """Exact edge betweenness of a weighted graph.

    Per-source shortest-path trees are independent, so sources may be
    fanned out across ``workers`` threads; contributions are reduced in a
    fixed chunk order either way, which keeps the result bit-stable
    across worker counts.
    """
    if np.any(g.weight <= 0):
        raise ValueError("edge betweenness requires strictly positive weights")
    m = g.num_edges
    if m == 0 or g.node_count <= 1:
        return EbcScores(np.zeros(m))

    n = g.node_count
    indptr = g.indptr.tolist()
    nbr = g.adj_node.tolist()
    eid = g.adj_edge.tolist()
    wts = g.adj_weight.tolist()

    chunks = [range(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]

    def run_chunk(sources) -> np.ndarray:
        acc = np.zeros(m)
        for s in sources:
            acc += np.asarray(_source_dependencies(n, m, indptr, nbr, eid, wts, s))
        return acc

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_chunk, chunks))
    else:
        partials = [run_chunk(c) for c in chunks]

    total = np.zeros(m)
    for p in partials:
        total += p
    # each unordered pair was visited from both endpoints
    return EbcScores(total / 2.0)


# -- exhaustive oracle -----------------------------------------------------

MAX_EXHAUSTIVE_NODES = 14


def _floyd_warshall(g) -> np.ndarray:
    n = g.node_count
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v, w in zip(g.edge_u, g.edge_v, g.weight):
        if w < dist[u, v]:
            dist[u, v] = dist[v, u] = w
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    return dist


def edge_betweenness_exhaustive(g) -> EbcScores:
    """Brute-force edge betweenness by enumerating every shortest path.

    Only for small graphs (|V| <= 14): distances come from Floyd-Warshall
    and every minimum-weight path between every unordered pair is listed
    explicitly by walking the shortest-path DAG.
    """
    if g.node_count > MAX_EXHAUSTIVE_NODES:
        raise ValueError(
            f"exhaustive oracle limited to {MAX_EXHAUSTIVE_NODES} nodes"
        )
    if np.any(g.weight <= 0):
        raise ValueError("edge betweenness requires strictly positive weights")
    n = g.node_count
    scores = np.zeros(g.num_edges)
    if n <= 1 or g.num_edges == 0:
        return EbcScores(scores)

    dist = _floyd_warshall(g)

    def all_paths(s: int, t: int) -> list[list[int]]:
        """Every minimum-weight s-t path, as edge-id lists."""
        paths = []

        def extend(v, remaining, edges_so_far):
            if v == t:
                paths.append(list(edges_so_far))
                return
            nodes, eids, weights = g.neighbors(v)
            for u, e, w in zip(nodes, eids, weights):
                # edge (v,u) lies on a shortest path iff it exactly spends
                # its weight of the remaining distance to t
                if _close(w + dist[u, t], remaining):
                    edges_so_far.append(int(e))
                    extend(int(u), remaining - w, edges_so_far)
                    edges_so_far.pop()

        extend(s, dist[s, t], [])
        return paths

    for s in range(n):
        for t in range(s + 1, n):
            if not np.isfinite(dist[s, t]):
                continue  # disconnected pair contributes nothing
            paths = all_paths(s, t)
            count = len(paths)
            for path in paths:
                for e in path:
                    scores[e] += 1.0 / count
    return EbcScores(scores)


# -- ranking + serialization ------------------------------------------------


def ranking_from_scores(scores: np.ndarray) -> np.ndarray:
    """Edge ids in descending score order; ties broken by ascending id."""
    scores = np.asarray(scores)
    return np.lexsort((np.arange(scores.size), -scores))


def save_scores_text(g, scores: EbcScores, path) -> None:
    """One "edge_u edge_v score" line per edge, in edge-id order."""
    with Path(path).open("w") as fh:
        for (u, v), s in zip(zip(g.edge_u, g.edge_v), scores.values):
            fh.write(f"{u} {v} {s:.17g}\n")


def load_scores_text(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (edge_u, edge_v, values) arrays from a text score file."""
    us, vs, ss = [], [], []
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'u v score'")
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
            ss.append(float(parts[2]))
    return (
        np.asarray(us, dtype=np.int64),
        np.asarray(vs, dtype=np.int64),
        np.asarray(ss, dtype=np.float64),
    )


def save_scores_json(scores: EbcScores, path) -> None:
    """JSON array indexed by edge id."""
    Path(path).write_text(json.dumps(scores.values.tolist()))


def load_scores_json(path) -> EbcScores:
    return EbcScores(np.asarray(json.loads(Path(path).read_text())))
