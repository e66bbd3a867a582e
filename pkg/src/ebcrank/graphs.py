"""Weighted undirected simple graphs with CSR adjacency.

The graph is immutable after construction: edges are canonicalized to
``u < v``, sorted lexicographically, and given dense edge ids in that
order.  All downstream pieces (exact centrality, line-graph transforms,
embeddings) index edges by these ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .seeding import child_rng

__all__ = [
    "WeightedGraph",
    "GeneratorConfig",
    "generate",
    "load_edge_list",
    "save_edge_list",
    "perturb_weights",
    "perturb_topology",
]


class WeightedGraph:
    """Undirected weighted simple graph.

    Parameters
    ----------
    node_count : int
        Number of nodes; node ids are ``0 .. node_count-1``.  Isolated
        nodes are allowed.
    edges : iterable of (u, v, w)
        Undirected edges with strictly positive weights.  Each unordered
        pair may appear at most once; self-loops are rejected.
    labels : sequence of str, optional
        Original node labels (e.g. from a file with non-dense ids);
        ``labels[i]`` is the label of compact node id ``i``.
    """

    __slots__ = (
        "node_count",
        "edge_u",
        "edge_v",
        "weight",
        "indptr",
        "adj_node",
        "adj_edge",
        "adj_weight",
        "labels",
        "_nbr_sets",
        "_edge_index",
    )

    def __init__(self, node_count, edges, labels=None):
        n = int(node_count)
        if n < 0:
            raise ValueError("node_count must be non-negative")
        us, vs, ws = [], [], []
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for {n} nodes")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (w > 0.0 and np.isfinite(w)):
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
            if u > v:
                u, v = v, u
            us.append(u)
            vs.append(v)
            ws.append(w)
        eu = np.asarray(us, dtype=np.int64)
        ev = np.asarray(vs, dtype=np.int64)
        wt = np.asarray(ws, dtype=np.float64)
        order = np.lexsort((ev, eu))
        eu, ev, wt = eu[order], ev[order], wt[order]
        if eu.size:
            dup = (eu[1:] == eu[:-1]) & (ev[1:] == ev[:-1])
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise ValueError(f"duplicate edge ({eu[i]},{ev[i]})")

        self.node_count = n
        self.edge_u = eu
        self.edge_v = ev
        self.weight = wt
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length must equal node_count")

        # CSR over directed arcs (each edge stored in both directions),
        # rows sorted by neighbor id.
        m = eu.size
        src = np.concatenate([eu, ev])
        dst = np.concatenate([ev, eu])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        awt = np.concatenate([wt, wt])
        aorder = np.lexsort((dst, src))
        src, dst, eid, awt = src[aorder], dst[aorder], eid[aorder], awt[aorder]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        self.indptr = indptr
        self.adj_node = dst
        self.adj_edge = eid
        self.adj_weight = awt
        for a in (self.edge_u, self.edge_v, self.weight, self.indptr,
                  self.adj_node, self.adj_edge, self.adj_weight):
            a.setflags(write=False)
        self._nbr_sets = None
        self._edge_index = None

    # -- basic accessors ------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return self.node_count

    @property
    def num_edges(self) -> int:
        return int(self.edge_u.size)

    def _check_node(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.node_count:
            raise ValueError(f"invalid node id {v}")
        return v

    def neighbors(self, v):
        """(neighbor ids, incident edge ids, weights) arrays for node v."""
        v = self._check_node(v)
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.adj_node[lo:hi], self.adj_edge[lo:hi], self.adj_weight[lo:hi]

    def degree(self, v) -> int:
        v = self._check_node(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def weighted_degree(self, v) -> float:
        v = self._check_node(v)
        return float(self.adj_weight[self.indptr[v]:self.indptr[v + 1]].sum())

    def neighbor_sets(self):
        """Per-node neighbor sets, built once on first use."""
        if self._nbr_sets is None:
            sets = [None] * self.node_count
            ptr, adj = self.indptr, self.adj_node
            for v in range(self.node_count):
                sets[v] = set(adj[ptr[v]:ptr[v + 1]].tolist())
            self._nbr_sets = sets
        return self._nbr_sets

    def edge_index(self):
        """dict mapping canonical endpoint pair (u, v), u < v, to edge id."""
        if self._edge_index is None:
            self._edge_index = {
                (int(u), int(v)): i
                for i, (u, v) in enumerate(zip(self.edge_u, self.edge_v))
            }
        return self._edge_index

    def edge_id(self, u, v) -> int:
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        try:
            return self.edge_index()[(u, v)]
        except KeyError:
            raise ValueError(f"no edge ({u},{v})") from None

    def has_edge(self, u, v) -> bool:
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_index()

    def endpoints(self, e) -> tuple[int, int]:
        e = int(e)
        if not 0 <= e < self.num_edges:
            raise ValueError(f"invalid edge id {e}")
        return int(self.edge_u[e]), int(self.edge_v[e])

    def edges(self):
        """List of (u, v, w) tuples in edge-id order."""
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.edge_u, self.edge_v, self.weight)
        ]

    def with_weights(self, new_weights) -> "WeightedGraph":
        """Same topology, new weight vector (indexed by edge id)."""
        w = np.asarray(new_weights, dtype=np.float64)
        if w.shape != (self.num_edges,):
            raise ValueError("weight vector length must equal edge count")
        return WeightedGraph(
            self.node_count,
            zip(self.edge_u, self.edge_v, w),
            labels=self.labels,
        )

    def __repr__(self):
        return f"WeightedGraph(n={self.node_count}, m={self.num_edges})"


# -- file I/O -------------------------------------------------------------

_NODES_DIRECTIVE = "# nodes"


def load_edge_list(path) -> WeightedGraph:
    """Read a "u v w" edge-list file.

    Lines starting with '#' and blank lines are ignored, except that a
    ``# nodes N`` directive (written by :func:`save_edge_list`) fixes the
    node count so isolated nodes survive a save/load round trip.  When the
    directive is present and all ids are integers in ``[0, N)`` they are
    used as-is; otherwise labels are compacted to a dense 0-based range
    (sorted numerically when all labels are integers, lexicographically
    otherwise) and the original labels are kept as a side table.
    """
    path = Path(path)
    declared = None
    raw: list[tuple[str, str, float, int]] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                if stripped.lower().startswith(_NODES_DIRECTIVE):
                    tail = stripped[len(_NODES_DIRECTIVE):].strip()
                    if tail.isdigit():
                        declared = int(tail)
                continue
            parts = stripped.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'u v w', got {stripped!r}")
            try:
                w = float(parts[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: weight {parts[2]!r} is not a number") from None
            if not (w > 0.0 and np.isfinite(w)):
                raise ValueError(f"{path}:{lineno}: non-positive weight {w}")
            if parts[0] == parts[1]:
                raise ValueError(f"{path}:{lineno}: self-loop at {parts[0]!r}")
            raw.append((parts[0], parts[1], w, lineno))

    def _as_int(tok: str) -> int | None:
        try:
            return int(tok)
        except ValueError:
            return None

    tokens = [t for u, v, _, _ in raw for t in (u, v)]
    ints = [_as_int(t) for t in tokens]
    all_int = all(i is not None for i in ints)

    if declared is not None and all_int and all(0 <= i < declared for i in ints):
        node_count = declared
        id_of = {t: int(t) for t in tokens}
        labels = None
    else:
        uniq = sorted(set(tokens), key=(int if all_int else str))
        id_of = {t: i for i, t in enumerate(uniq)}
        node_count = len(uniq)
        labels = uniq

    try:
        return WeightedGraph(
            node_count,
            [(id_of[u], id_of[v], w) for u, v, w, _ in raw],
            labels=labels,
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def save_edge_list(g: WeightedGraph, path) -> None:
    """Write ``g`` in the edge-list format read by :func:`load_edge_list`.

    Weights are written with 17 significant digits so they round-trip
    bit-exactly.
    """
    path = Path(path)
    labels = g.labels if g.labels is not None else [str(i) for i in range(g.node_count)]
    with path.open("w") as fh:
        fh.write(f"{_NODES_DIRECTIVE} {g.node_count}\n")
        for u, v, w in zip(g.edge_u, g.edge_v, g.weight):
            fh.write(f"{labels[u]} {labels[v]} {w:.17g}\n")


# -- synthetic generators --------------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters for the three synthetic graph families.

    family "gnp":  every unordered pair is an edge independently with
        probability ``p_edge``; if ``p_edge`` is None the probability is
        ``expected_degree / (n - 1)`` for the drawn node count n.
    family "gnm":  edge count is ``round(f * n)`` with the factor f drawn
        uniformly from ``edge_factor_range``; edges placed uniformly at
        random without duplicates.
    family "ws":   ring lattice of even ``mean_degree``, each lattice edge
        rewired independently with probability ``p_rewire``.

    Node count is drawn uniformly (inclusive) from ``node_range``; edge
    weights are i.i.d. uniform on ``weight_range``.
    """

    family: str
    node_range: tuple[int, int]
    weight_range: tuple[float, float] = (0.0, 100.0)
    p_edge: float | None = None
    expected_degree: float | None = None
    edge_factor_range: tuple[float, float] | None = None
    mean_degree: int | None = None
    p_rewire: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in ("gnp", "gnm", "ws"):
            raise ValueError(f"unknown family {self.family!r}")
        lo, hi = self.node_range
        if not (0 < lo <= hi):
            raise ValueError("node_range must be a non-empty positive range")
        wlo, whi = self.weight_range
        if not (0.0 <= wlo <= whi):
            raise ValueError("weight_range lower bound must be >= 0")
        if self.family == "gnp":
            if (self.p_edge is None) == (self.expected_degree is None):
                raise ValueError("gnp needs exactly one of p_edge / expected_degree")
            if self.p_edge is not None and not 0.0 <= self.p_edge <= 1.0:
                raise ValueError("p_edge must be in [0, 1]")
        elif self.family == "gnm":
            if self.edge_factor_range is None:
                raise ValueError("gnm needs edge_factor_range")
            flo, fhi = self.edge_factor_range
            if not (0.0 <= flo <= fhi):
                raise ValueError("edge_factor_range must be a valid interval")
        else:
            if self.mean_degree is None or self.p_rewire is None:
                raise ValueError("ws needs mean_degree and p_rewire")
            if self.mean_degree <= 0 or self.mean_degree % 2:
                raise ValueError("ws mean_degree must be even and positive")
            if not 0.0 <= self.p_rewire <= 1.0:
                raise ValueError("p_rewire must be in [0, 1]")


def _draw_weights(rng: np.random.Generator, m: int, lo: float, hi: float) -> np.ndarray:
    w = rng.uniform(lo, hi, size=m)
    # weights must be strictly positive; redraw the measure-zero hits at lo=0
    while np.any(w <= 0.0):
        bad = w <= 0.0
        w[bad] = rng.uniform(lo, hi, size=int(bad.sum()))
    return w


def _gnp_edges(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    edges = []
    for u in range(n - 1):
        hits = np.flatnonzero(rng.random(n - 1 - u) < p)
        edges.extend((u, u + 1 + int(h)) for h in hits)
    return edges


def _pair_unrank(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Decode linear indices over unordered pairs (u<v) of n nodes."""
    counts = np.arange(n - 1, 0, -1, dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    u = np.searchsorted(offsets, idx, side="right") - 1
    v = idx - offsets[u] + u + 1
    return u, v


def _gnm_edges(rng: np.random.Generator, n: int, m: int) -> list[tuple[int, int]]:
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError(f"cannot place {m} edges on {n} nodes (max {total})")
    chosen: set[int] = set()
    while len(chosen) < m:
        draw = rng.integers(0, total, size=m - len(chosen))
        for d in draw.tolist():
            if len(chosen) < m:
                chosen.add(d)
    idx = np.fromiter(chosen, dtype=np.int64, count=len(chosen))
    idx.sort()
    u, v = _pair_unrank(idx, n)
    return list(zip(u.tolist(), v.tolist()))


def _ws_edges(rng: np.random.Generator, n: int, k: int, beta: float) -> list[tuple[int, int]]:
    if n <= k:
        raise ValueError("ws needs node count > mean_degree")
    edge_set: set[tuple[int, int]] = set()
    deg = np.full(n, k, dtype=np.int64)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            edge_set.add((u, v) if u < v else (v, u))
    # classic rewiring: visit lattice edges in construction order, move the
    # far endpoint to a uniform random node avoiding loops and duplicates
    for j in range(1, k // 2 + 1):
        for u in range(n):
            if rng.random() >= beta:
                continue
            v = (u + j) % n
            cur = (u, v) if u < v else (v, u)
            if cur not in edge_set:
                continue
            if deg[u] >= n - 1:
                continue
            while True:
                w = int(rng.integers(0, n))
                cand = (u, w) if u < w else (w, u)
                if w != u and cand not in edge_set:
                    edge_set.remove(cur)
                    edge_set.add(cand)
                    deg[v] -= 1
                    deg[w] += 1
                    break
    return sorted(edge_set)


def generate(config: GeneratorConfig) -> WeightedGraph:
    """Sample one graph from the configured family, seeded by config.seed."""
    rng = child_rng(config.seed, "generate", config.family)
    lo, hi = config.node_range
    n = int(rng.integers(lo, hi + 1))
    if config.family == "gnp":
        p = config.p_edge
        if p is None:
            p = min(1.0, config.expected_degree / max(n - 1, 1))
        pairs = _gnp_edges(rng, n, p)
    elif config.family == "gnm":
        flo, fhi = config.edge_factor_range
        m = int(round(rng.uniform(flo, fhi) * n))
        pairs = _gnm_edges(rng, n, m)
    else:
        pairs = _ws_edges(rng, n, config.mean_degree, config.p_rewire)
    wlo, whi = config.weight_range
    weights = _draw_weights(rng, len(pairs), wlo, whi)
    return WeightedGraph(n, [(u, v, w) for (u, v), w in zip(pairs, weights)])


# -- perturbation models ----------------------------------------------------


def perturb_weights(g: WeightedGraph, r_range: tuple[float, float], seed: int) -> WeightedGraph:
    """Scale every weight by an i.i.d. factor r ~ Uniform(r_range)."""
    lo, hi = float(r_range[0]), float(r_range[1])
    if not (0.0 < lo <= hi):
        raise ValueError("r_range lower bound must be > 0")
    rng = child_rng(seed, "perturb-weights")
    if lo == hi:
        r = np.full(g.num_edges, lo)
    else:
        r = rng.uniform(lo, hi, size=g.num_edges)
    return g.with_weights(g.weight * r)


def perturb_topology(
    g: WeightedGraph,
    edge_count_range: tuple[int, int],
    r_range: tuple[float, float],
    seed: int,
) -> WeightedGraph:
    """Delete or add edges to hit a random target count, then jitter weights.

    The target edge count is drawn uniformly (inclusive) from
    ``edge_count_range``.  Deletions pick surviving edges uniformly at
    random; additions connect uniform random unconnected node pairs with
    weights sampled from the empirical distribution of the surviving
    edges.  Finally weights are perturbed as in :func:`perturb_weights`.
    """
    lo, hi = int(edge_count_range[0]), int(edge_count_range[1])
    max_pairs = g.node_count * (g.node_count - 1) // 2
    if not (1 <= lo <= hi <= max_pairs):
        raise ValueError(f"edge_count_range must lie in [1, {max_pairs}]")
    rng = child_rng(seed, "perturb-topology")
    target = int(rng.integers(lo, hi + 1))
    m = g.num_edges

    if target <= m:
        keep = rng.choice(m, size=target, replace=False)
        keep.sort()
        edges = [
            (int(g.edge_u[i]), int(g.edge_v[i]), float(g.weight[i])) for i in keep
        ]
    else:
        edges = g.edges()
        existing = {(u, v) for u, v, _ in edges}
        base_weights = np.array([w for _, _, w in edges])
        while len(edges) < target:
            u = int(rng.integers(0, g.node_count))
            v = int(rng.integers(0, g.node_count))
            if u == v:
                continue
            if u > v:
                u, v = v, u
            if (u, v) in existing:
                continue
            w = float(base_weights[int(rng.integers(0, base_weights.size))])
            existing.add((u, v))
            edges.append((u, v, w))

    result = WeightedGraph(g.node_count, edges, labels=g.labels)
    rlo, rhi = float(r_range[0]), float(r_range[1])
    if not (0.0 < rlo <= rhi):
        raise ValueError("r_range lower bound must be > 0")
    if rlo == rhi:
        r = np.full(result.num_edges, rlo)
    else:
        r = rng.uniform(rlo, rhi, size=result.num_edges)
    return result.with_weights(result.weight * r)
