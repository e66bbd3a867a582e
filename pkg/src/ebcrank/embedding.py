"""Initial edge features from biased random walks.

Walks are second-order: the step distribution is reweighted by a bias
factor that depends on the previous node (return parameter p, in-out
parameter q).  Transition probabilities are always computed on the fly
from the CSR adjacency, never precomputed into a table, so the auxiliary
memory per walk stays proportional to the maximum degree.  Each walk has
its own RNG stream keyed by (seed, node, walk index), which makes the
corpus independent of scheduling order or worker count.

Node vectors come from a small skip-gram-with-negative-sampling trainer
over the walk corpus; an edge vector is the average of its two endpoint
vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .seeding import child_rng

__all__ = [
    "WalkParams",
    "WalkCorpus",
    "EmbeddingMatrix",
    "first_order_prob",
    "second_order_prob",
    "generate_walks",
    "train_skipgram",
    "SkipgramResult",
    "edge_embeddings",
    "embed_graph",
    "save_embedding_text",
    "load_embedding_text",
]

_BATCH = 4096
_MIN_LR = 1e-4
_NEG_POWER = 0.75  # unigram smoothing exponent for negative sampling


def _scatter_add_rows(target: np.ndarray, idx: np.ndarray, rows: np.ndarray) -> None:
    """target[idx] += rows with duplicate indices accumulated in order."""
    np.add.at(target, idx, rows)


@dataclass(frozen=True)
class WalkParams:
    """Random-walk and skip-gram hyperparameters.

    ``window`` is the total span of the sliding window (3 means one
    context on each side of the center, matching a window that covers
    three consecutive walk positions).
    """

    p: float = 1.0
    q: float = 2.0
    walk_length: int = 30
    walks_per_node: int = 10
    window: int = 3
    negative_samples: int = 5
    dim: int = 256
    sgns_epochs: int = 5
    sgns_lr: float = 0.025
    seed: int = 0

    def __post_init__(self):
        if min(self.p, self.q, self.sgns_lr) <= 0:
            raise ValueError("p, q, sgns_lr must be positive")
        if min(self.walk_length, self.walks_per_node, self.window,
               self.negative_samples, self.dim, self.sgns_epochs) <= 0:
            raise ValueError("integer walk parameters must be positive")
        if self.window >= self.walk_length:
            raise ValueError("window must be smaller than walk_length")


@dataclass
class WalkCorpus:
    walks: list[list[int]]
    num_nodes: int
    walk_length: int


@dataclass
class EmbeddingMatrix:
    """Per-edge feature matrix (one row per edge id)."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("embedding must be a 2-d matrix")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("embedding contains non-finite entries")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


# -- transition probabilities ------------------------------------------------


def first_order_prob(g, v: int, u: int) -> float:
    """P(step to u | at v) for the first, unbiased step of a walk."""
    nodes, _, weights = g.neighbors(v)
    if nodes.size == 0:
        raise ValueError(f"node {v} is isolated")
    mask = nodes == int(u)
    if not mask.any():
        raise ValueError(f"{u} is not a neighbor of {v}")
    return float(weights[mask][0] / weights.sum())


def second_order_prob(g, t: int, v: int, u: int, p: float, q: float) -> float:
    """P(step to u | at v, came from t) under the (p, q) bias.

    The bias factor is 1/p when u returns to t, 1 when u is a different
    neighbor of t, and 1/q when u and t are not connected; the factor
    multiplies the edge weight before normalization over the neighbors of
    v.  With p = q = 1 this reduces to :func:`first_order_prob`.
    """
    t, v, u = int(t), int(v), int(u)
    nodes, _, weights = g.neighbors(v)
    if nodes.size == 0:
        raise ValueError(f"node {v} is isolated")
    if t not in g.neighbor_sets()[v]:
        raise ValueError(f"previous node {t} is not a neighbor of {v}")
    if u not in g.neighbor_sets()[v]:
        raise ValueError(f"{u} is not a neighbor of {v}")
    nbr_t = g.neighbor_sets()[t]
    total = 0.0
    chosen = 0.0
    for node, w in zip(nodes.tolist(), weights.tolist()):
        if node == t:
            f = w / p
        elif node in nbr_t:
            f = w
        else:
            f = w / q
        total += f
        if node == u:
            chosen = f
    return chosen / total


# -- walk generation ---------------------------------------------------------


def _one_walk(start, uniforms, indptr, nbr, wts, nbr_sets, inv_p, inv_q, length):
    walk = [start]
    lo, hi = indptr[start], indptr[start + 1]
    if lo == hi:
        return walk  # isolated start: length-1 stub
    # first step: weight-proportional
    total = 0.0
    for k in range(lo, hi):
        total += wts[k]
    target = uniforms[0] * total
    acc = 0.0
    cur = nbr[hi - 1]
    for k in range(lo, hi):
        acc += wts[k]
        if target < acc:
            cur = nbr[k]
            break
    walk.append(cur)
    prev = start
    factors = []
    for step in range(2, length):
        lo, hi = indptr[cur], indptr[cur + 1]
        prev_nbrs = nbr_sets[prev]
        total = 0.0
        factors.clear()
        for k in range(lo, hi):
            node = nbr[k]
            w = wts[k]
            if node == prev:
                f = w * inv_p
            elif node in prev_nbrs:
                f = w
            else:
                f = w * inv_q
            factors.append(f)
            total += f
        target = uniforms[step - 1] * total
        acc = 0.0
        pick = hi - 1
        for k, f in enumerate(factors):
            acc += f
            if target < acc:
                pick = lo + k
                break
        prev = cur
        cur = nbr[pick]
        walk.append(cur)
    return walk


def generate_walks(g, params: WalkParams, workers: int = 1) -> WalkCorpus:
    """walks_per_node second-order walks from every node.

    Worker count never changes the output: walk w of node v always draws
    from the stream keyed (seed, "walk", v, w).  Threads only help when
    callers release the GIL elsewhere; the default is sequential.
    """
    n = g.node_count
    indptr = g.indptr.tolist()
    nbr = g.adj_node.tolist()
    wts = g.adj_weight.tolist()
    nbr_sets = g.neighbor_sets()
    inv_p, inv_q = 1.0 / params.p, 1.0 / params.q
    length = params.walk_length
    per_node = params.walks_per_node

    def walk_for(v: int, w: int) -> list[int]:
        uniforms = child_rng(params.seed, "walk", v, w).random(max(length - 1, 1))
        return _one_walk(v, uniforms.tolist(), indptr, nbr, wts,
                         nbr_sets, inv_p, inv_q, length)

    walks: list[list[int] | None] = [None] * (n * per_node)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        def fill(v: int) -> None:
            base = v * per_node
            for w in range(per_node):
                walks[base + w] = walk_for(v, w)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(n)))
    else:
        for v in range(n):
            base = v * per_node
            for w in range(per_node):
                walks[base + w] = walk_for(v, w)

    return WalkCorpus(walks=walks, num_nodes=n, walk_length=length)


# -- skip-gram with negative sampling ----------------------------------------


@dataclass
class SkipgramResult:
    embedding: np.ndarray  # num_nodes x dim, the center ("input") vectors
    epoch_loss: list[float]


def _window_pairs(corpus: WalkCorpus, window: int) -> tuple[np.ndarray, np.ndarray]:
    """(center, context) id arrays from full sliding windows."""
    left = window // 2
    right = window - 1 - left
    by_len: dict[int, list[list[int]]] = {}
    for w in corpus.walks:
        by_len.setdefault(len(w), []).append(w)
    centers, contexts = [], []
    for length in sorted(by_len):
        if length < window:
            continue  # stub walks contribute no pairs
        arr = np.asarray(by_len[length], dtype=np.int64)
        for c in range(left, length - right):
            for off in range(-left, right + 1):
                if off == 0:
                    continue
                centers.append(arr[:, c])
                contexts.append(arr[:, c + off])
    if not centers:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(centers), np.concatenate(contexts)


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = -np.log1p(np.exp(-x[pos]))
    out[~pos] = x[~pos] - np.log1p(np.exp(x[~pos]))
    return out


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def train_skipgram(corpus: WalkCorpus, params: WalkParams) -> SkipgramResult:
    """SGD on the skip-gram negative-sampling objective.

    Positive (center, context) pairs come from full sliding windows over
    every walk; negatives are drawn from the corpus unigram distribution
    raised to the 3/4 power.  The learning rate decays linearly to a small
    floor over the whole run.  Single-threaded and fully deterministic
    given the corpus and params.
    """
    centers, contexts = _window_pairs(corpus, params.window)
    if centers.size == 0:
        raise ValueError("corpus has no training pairs (all walks are stubs)")
    n = corpus.num_nodes
    d = params.dim
    rng = child_rng(params.seed, "sgns")

    counts = np.zeros(n)
    for w in corpus.walks:
        np.add.at(counts, w, 1.0)
    neg_weights = counts ** _NEG_POWER
    neg_cum = np.cumsum(neg_weights)
    neg_cum /= neg_cum[-1]

    w_in = (rng.random((n, d)) - 0.5) / d
    w_out = np.zeros((n, d))

    npairs = centers.size
    k = params.negative_samples
    total_batches = params.sgns_epochs * ((npairs + _BATCH - 1) // _BATCH)
    lr0 = params.sgns_lr
    batch_no = 0
    epoch_loss: list[float] = []

    for _epoch in range(params.sgns_epochs):
        order = rng.permutation(npairs)
        losses = 0.0
        for lo in range(0, npairs, _BATCH):
            sel = order[lo:lo + _BATCH]
            c = centers[sel]
            o = contexts[sel]
            b = c.size
            negs = np.searchsorted(neg_cum, rng.random((b, k)))
            vc = w_in[c]
            vo = w_out[o]
            vn = w_out[negs]
            pos_score = np.einsum("bd,bd->b", vc, vo)
            neg_score = np.einsum("bd,bkd->bk", vc, vn)
            losses += float(
                -(_log_sigmoid(pos_score).sum())
                - _log_sigmoid(-neg_score).sum()
            )
            g_pos = _sigmoid(pos_score) - 1.0  # dL/dpos_score
            g_neg = _sigmoid(neg_score)        # dL/dneg_score
            lr = max(_MIN_LR, lr0 * (1.0 - batch_no / total_batches))
            grad_c = g_pos[:, None] * vo + np.einsum("bk,bkd->bd", g_neg, vn)
            grad_o = g_pos[:, None] * vc
            grad_n = g_neg[:, :, None] * vc[:, None, :]
            _scatter_add_rows(w_in, c, -lr * grad_c)
            out_idx = np.concatenate([o, negs.reshape(-1)])
            out_grad = np.concatenate([grad_o, grad_n.reshape(-1, d)])
            _scatter_add_rows(w_out, out_idx, -lr * out_grad)
            batch_no += 1
        epoch_loss.append(losses / npairs)

    return SkipgramResult(embedding=w_in, epoch_loss=epoch_loss)


# -- edge features ------------------------------------------------------------


def edge_embeddings(node_emb: np.ndarray, g) -> EmbeddingMatrix:
    """Average the two endpoint vectors of every edge."""
    node_emb = np.asarray(node_emb, dtype=np.float64)
    if node_emb.ndim != 2 or node_emb.shape[0] != g.node_count:
        raise ValueError(
            f"node embedding must have {g.node_count} rows, got {node_emb.shape}"
        )
    return EmbeddingMatrix((node_emb[g.edge_u] + node_emb[g.edge_v]) / 2.0)


def embed_graph(g, params: WalkParams, workers: int = 1) -> EmbeddingMatrix:
    """Full pipeline: walks -> skip-gram -> endpoint-averaged edge matrix."""
    corpus = generate_walks(g, params, workers=workers)
    result = train_skipgram(corpus, params)
    return edge_embeddings(result.embedding, g)


# -- serialization -------------------------------------------------------------


def save_embedding_text(emb: EmbeddingMatrix, path) -> None:
    """word2vec-style text layout: "rows dim" header, then "id v1 .. vd"."""
    with Path(path).open("w") as fh:
        fh.write(f"{emb.rows} {emb.dim}\n")
        for i, row in enumerate(emb.values):
            fh.write(str(i) + " " + " ".join(f"{v:.17g}" for v in row) + "\n")


def load_embedding_text(path) -> EmbeddingMatrix:
    with Path(path).open() as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed embedding header")
        rows, dim = int(header[0]), int(header[1])
        values = np.zeros((rows, dim))
        seen = 0
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            idx = int(parts[0])
            if len(parts) != dim + 1:
                raise ValueError(f"{path}: row {idx} has wrong dimension")
            values[idx] = [float(t) for t in parts[1:]]
            seen += 1
        if seen != rows:
            raise ValueError(f"{path}: expected {rows} rows, found {seen}")
    return EmbeddingMatrix(values)
