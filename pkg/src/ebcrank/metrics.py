"""Ranking-quality metrics and weighted graph statistics."""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappush, heappop

import numpy as np

__all__ = [
    "RankCorrelation",
    "GraphStats",
    "kendall_tau",
    "spearman_rho",
    "rank_correlation",
    "graph_stats",
]


@dataclass(frozen=True)
class RankCorrelation:
    tau: float
    rho: float
    n: int


@dataclass(frozen=True)
class GraphStats:
    avg_shortest_path: float
    avg_clustering: float
    avg_degree: float
    unreachable_pairs: int  # ordered pairs excluded from the path average


def _as_vectors(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d vectors of equal length")
    if x.size < 2:
        raise ValueError("need at least two observations")
    return x, y


def _tie_count(sorted_vals: np.ndarray) -> int:
    """sum over tie groups of t*(t-1)/2, for an already-sorted vector."""
    boundaries = np.flatnonzero(sorted_vals[1:] != sorted_vals[:-1])
    sizes = np.diff(np.concatenate([[-1], boundaries, [sorted_vals.size - 1]]))
    return int((sizes * (sizes - 1) // 2).sum())


def _merge_count_inversions(a: list[float]) -> int:
    """Number of pairs i<j with a[i] > a[j] (strict), by merge sort."""
    n = len(a)
    buf = a[:]
    tmp = [0.0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if buf[j] < buf[i]:
                    tmp[k] = buf[j]
                    inv += mid - i
                    j += 1
                else:
                    tmp[k] = buf[i]
                    i += 1
                k += 1
            tmp[k:hi] = buf[i:mid] if i < mid else buf[j:hi]
            buf[lo:hi] = tmp[lo:hi]
        width *= 2
    return inv


def kendall_tau(x, y) -> float:
    """Kendall rank correlation, tau-a convention.

    (concordant - discordant) / (n*(n-1)/2); pairs tied in either input
    count as neither.  O(n log n) via sort plus inversion counting.
    """
    x, y = _as_vectors(x, y)
    n = x.size
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    total = n * (n - 1) // 2
    xtie = _tie_count(xs)
    ytie = _tie_count(np.sort(y, kind="stable"))
    joint = np.flatnonzero((xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1]))
    sizes = np.diff(np.concatenate([[-1], joint, [n - 1]]))
    jtie = int((sizes * (sizes - 1) // 2).sum())
    swaps = _merge_count_inversions(ys.tolist())
    con_minus_dis = total - xtie - ytie + jtie - 2 * swaps
    return con_minus_dis / total


def _average_ranks(a: np.ndarray) -> np.ndarray:
    """1-based ranks with tied values sharing their average rank."""
    order = np.argsort(a, kind="stable")
    sa = a[order]
    new_group = np.concatenate([[True], sa[1:] != sa[:-1]])
    group = np.cumsum(new_group) - 1
    counts = np.bincount(group)
    ends = np.cumsum(counts)
    starts = ends - counts + 1
    avg = (starts + ends) / 2.0
    ranks = np.empty(a.size)
    ranks[order] = avg[group]
    return ranks


def spearman_rho(x, y) -> float:
    """Spearman rank correlation: Pearson correlation of average ranks."""
    x, y = _as_vectors(x, y)
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    if np.array_equal(rx, ry):
        return 1.0  # identical rankings, exact by definition
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    den = np.sqrt(dx @ dx) * np.sqrt(dy @ dy)
    if den == 0.0:
        raise ValueError("rank variance is zero (all values identical)")
    return float(np.clip((dx @ dy) / den, -1.0, 1.0))


def rank_correlation(x, y) -> RankCorrelation:
    x, _ = _as_vectors(x, y)
    return RankCorrelation(tau=kendall_tau(x, y), rho=spearman_rho(x, y), n=x.size)


# -- graph statistics --------------------------------------------------------


def _distances_from(g, s: int) -> list[float]:
    inf = float("inf")
    n = g.node_count
    indptr, nbr, wts = g.indptr.tolist(), g.adj_node.tolist(), g.adj_weight.tolist()
    dist = [inf] * n
    done = [False] * n
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, v = heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for k in range(indptr[v], indptr[v + 1]):
            u = nbr[k]
            nd = d + wts[k]
            if nd < dist[u]:
                dist[u] = nd
                heappush(heap, (nd, u))
    return dist


def graph_stats(g) -> GraphStats:
    """Average shortest path length, Onnela clustering, average degree.

    The path average runs over ordered reachable pairs s != t; unreachable
    pairs are excluded from both numerator and denominator and reported in
    ``unreachable_pairs``.  Clustering uses the geometric-mean triangle
    formula on weights normalized by the graph maximum; nodes of degree
    below 2 contribute zero.
    """
    n = g.node_count
    if n == 0:
        raise ValueError("empty graph")
    m = g.num_edges

    total = 0.0
    reachable = 0
    for s in range(n):
        dist = _distances_from(g, s)
        for t in range(n):
            if t != s and dist[t] != float("inf"):
                total += dist[t]
                reachable += 1
    unreachable = n * (n - 1) - reachable
    avg_sp = total / reachable if reachable else 0.0

    wmax = float(g.weight.max()) if m else 1.0
    eindex = g.edge_index()
    wt = g.weight
    third = 1.0 / 3.0
    clustering_sum = 0.0
    for s in range(n):
        nbrs, eids, _ = g.neighbors(s)
        deg = nbrs.size
        if deg < 2:
            continue
        acc = 0.0
        nb = nbrs.tolist()
        ew = (g.adj_weight[g.indptr[s]:g.indptr[s + 1]] / wmax).tolist()
        for i in range(deg):
            for j in range(i + 1, deg):
                e = eindex.get((nb[i], nb[j]) if nb[i] < nb[j] else (nb[j], nb[i]))
                if e is None:
                    continue
                acc += (ew[i] * ew[j] * (wt[e] / wmax)) ** third
        # ordered pairs (t,u): double the unordered sum
        clustering_sum += 2.0 * acc / (deg * (deg - 1))
    avg_clustering = clustering_sum / n

    return GraphStats(
        avg_shortest_path=avg_sp,
        avg_clustering=avg_clustering,
        avg_degree=2.0 * m / n,
        unreachable_pairs=unreachable,
    )
