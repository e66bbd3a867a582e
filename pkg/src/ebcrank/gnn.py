"""Twin-branch edge-ranking GNN.

Architecture, per layer k = 1..K and per branch (one branch aggregates
over the degree-scaled edge adjacency, the other over the weight-scaled
one, with shared layer weights and shared per-layer MLP heads):

    H_b(k) = dropout(leaky_relu(A_b @ H_b(k-1) @ W(k)))
    s_b(k) = MLP_k(H_b(k))            three stages h -> h/2 -> h/4 -> 1,
                                      tanh after the first two
    S_b    = sum_k |s_b(k)|
    score  = S_deg * S_wt             (elementwise)

Training minimizes a pairwise margin ranking loss against exact edge
betweenness values with Adam.  Gradients are a hand-derived reverse-mode
pass over the computation above; correctness is pinned by a finite
difference test rather than an autodiff framework.

The sparse aggregation A @ X sums each output entry's terms in ascending
value order, which makes the whole forward pass exactly equivariant under
edge relabeling (plain CSR summation order would depend on the labels
through last-ulp rounding).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .exact import ranking_from_scores
from .seeding import child_rng

__all__ = [
    "GnnHyper",
    "GnnModel",
    "TrainConfig",
    "RankResult",
    "SparseAgg",
    "xavier_init",
    "forward",
    "backward",
    "sample_pairs",
    "margin_ranking_loss",
    "pair_loss_and_score_grad",
    "train",
    "infer_ranking",
    "GraphFeatures",
    "prepare_features",
    "save_checkpoint",
    "load_checkpoint",
]

VARIANTS = ("both", "degree", "weight", "binary")


@dataclass(frozen=True)
class GnnHyper:
    lr: float = 5e-4
    dropout: float = 0.3
    epochs: int = 50
    margin: float = 1.0
    pair_factor: int = 20
    leaky_slope: float = 0.01

    def __post_init__(self):
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.lr <= 0 or self.epochs <= 0 or self.pair_factor <= 0:
            raise ValueError("lr, epochs, pair_factor must be positive")


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and split settings for the training harness."""

    seed: int = 0
    train_fraction: float = 0.9
    test_fraction: float = 0.1
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        ok = 0.0 < self.train_fraction < 1.0 and 0.0 < self.test_fraction < 1.0
        if not ok or self.train_fraction + self.test_fraction > 1.0 + 1e-9:
            raise ValueError("split fractions must be in (0,1) and sum to <= 1")


@dataclass
class RankResult:
    """Scores plus the induced descending-order ranking of edge ids."""

    scores: np.ndarray
    ranking: np.ndarray

    @classmethod
    def from_scores(cls, scores: np.ndarray) -> "RankResult":
        scores = np.asarray(scores, dtype=np.float64)
        return cls(scores=scores, ranking=ranking_from_scores(scores))


def _mlp_dims(hidden: int) -> tuple[int, int]:
    if hidden < 4:
        raise ValueError("hidden width must be at least 4")
    return hidden // 2, hidden // 4


def _param_shapes(layers: int, dim_in: int, hidden: int) -> dict[str, tuple[int, ...]]:
    h2, h4 = _mlp_dims(hidden)
    shapes: dict[str, tuple[int, ...]] = {}
    for k in range(1, layers + 1):
        shapes[f"w{k}"] = (dim_in if k == 1 else hidden, hidden)
        shapes[f"mlp{k}_w1"] = (hidden, h2)
        shapes[f"mlp{k}_b1"] = (h2,)
        shapes[f"mlp{k}_w2"] = (h2, h4)
        shapes[f"mlp{k}_b2"] = (h4,)
        shapes[f"mlp{k}_w3"] = (h4, 1)
        shapes[f"mlp{k}_b3"] = (1,)
    return shapes


@dataclass
class GnnModel:
    layers: int
    dim_in: int
    hidden: int
    capacity: int
    hyper: GnnHyper
    params: dict[str, np.ndarray]

    def param_names(self) -> list[str]:
        return sorted(self.params)

    def copy(self) -> "GnnModel":
        return GnnModel(
            layers=self.layers, dim_in=self.dim_in, hidden=self.hidden,
            capacity=self.capacity, hyper=self.hyper,
            params={k: v.copy() for k, v in self.params.items()},
        )


def xavier_init(
    layers: int,
    dim_in: int,
    hidden: int,
    capacity: int,
    seed: int,
    hyper: GnnHyper | None = None,
) -> GnnModel:
    """Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)); zero biases."""
    rng = child_rng(seed, "init")
    params: dict[str, np.ndarray] = {}
    for name, shape in _param_shapes(layers, dim_in, hidden).items():
        if len(shape) == 1:
            params[name] = np.zeros(shape)
        else:
            fan_in, fan_out = shape
            a = np.sqrt(6.0 / (fan_in + fan_out))
            params[name] = rng.uniform(-a, a, size=shape)
    return GnnModel(
        layers=layers, dim_in=dim_in, hidden=hidden, capacity=capacity,
        hyper=hyper or GnnHyper(), params=params,
    )


# -- exact-order sparse aggregation -------------------------------------------


class SparseAgg:
    """A symmetric sparse matrix prepared for order-canonical products.

    Rows are grouped by nonzero count; each output entry of ``matmul`` is
    the sum of its terms in ascending value order, so the result depends
    only on the multiset of terms and not on edge labeling.
    """

    def __init__(self, mat):
        self.dim = int(mat.dim)
        indptr, cols, vals = mat.csr()
        vals = np.asarray(vals, dtype=np.float64)
        deg = np.diff(indptr)
        self.groups: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        for k in np.unique(deg):
            if k == 0:
                continue
            rows = np.flatnonzero(deg == k)
            pos = indptr[rows][:, None] + np.arange(k)[None, :]
            self.groups.append((rows, cols[pos], vals[pos]))

    def matmul(self, x: np.ndarray) -> np.ndarray:
        if x.shape[0] != self.dim:
            raise ValueError(f"operand has {x.shape[0]} rows, expected {self.dim}")
        out = np.zeros((self.dim, x.shape[1]))
        for rows, cmat, vmat in self.groups:
            terms = vmat[:, :, None] * x[cmat]
            terms.sort(axis=1)
            out[rows] = terms.sum(axis=1)
        return out


# -- forward / backward --------------------------------------------------------


def _leaky(z: np.ndarray, slope: float) -> np.ndarray:
    return np.where(z > 0, z, slope * z)


def forward(
    model: GnnModel,
    adjs: list[SparseAgg],
    h0: np.ndarray,
    train_mode: bool = False,
    dropout_rng: np.random.Generator | None = None,
    dropout_masks: list[list[np.ndarray]] | None = None,
):
    """Run the network; returns (scores, cache or None).

    ``adjs`` holds one prepared adjacency per branch (two for the full
    model, one for single-matrix ablation variants); the branch score
    sums are multiplied elementwise.  A cache of intermediate activations
    is returned in train mode for :func:`backward`.

    Graphs below the model capacity need no physical zero-padding: a
    padded block is all zeros in every aggregation and never mixes into
    real rows, so running on the unpadded arrays is exact.  Inputs larger
    than the capacity are rejected.
    """
    m, d = h0.shape
    if d != model.dim_in:
        raise ValueError(f"feature dim {d} != model dim {model.dim_in}")
    if m > model.capacity:
        raise ValueError(f"graph has {m} edges, model capacity is {model.capacity}")
    for a in adjs:
        if a.dim != m:
            raise ValueError("adjacency and feature matrix disagree on edge count")
    if not (1 <= len(adjs) <= 2):
        raise ValueError("forward takes one or two branch adjacencies")

    p = model.params
    hyper = model.hyper
    rate = hyper.dropout if train_mode else 0.0
    use_masks = dropout_masks is not None

    branch_sums: list[np.ndarray] = []
    cache_branches = []
    for b, agg in enumerate(adjs):
        h = h0
        ssum = np.zeros(m)
        layer_cache = []
        for k in range(1, model.layers + 1):
            pk = agg.matmul(h)
            zk = pk @ p[f"w{k}"]
            hact = _leaky(zk, hyper.leaky_slope)
            if use_masks:
                mask = dropout_masks[b][k - 1]
            elif rate > 0.0:
                keep = dropout_rng.random(hact.shape) >= rate
                mask = keep / (1.0 - rate)
            else:
                mask = None
            hk = hact if mask is None else hact * mask
            u1 = hk @ p[f"mlp{k}_w1"] + p[f"mlp{k}_b1"]
            t1 = np.tanh(u1)
            u2 = t1 @ p[f"mlp{k}_w2"] + p[f"mlp{k}_b2"]
            t2 = np.tanh(u2)
            sk = (t2 @ p[f"mlp{k}_w3"] + p[f"mlp{k}_b3"]).ravel()
            if not (np.all(np.isfinite(hk)) and np.all(np.isfinite(sk))):
                raise FloatingPointError(
                    f"non-finite activation at layer {k}, branch {b}"
                )
            ssum = ssum + np.abs(sk)
            layer_cache.append(
                {"h_prev": h, "p": pk, "z": zk, "mask": mask, "h": hk,
                 "t1": t1, "t2": t2, "s": sk}
            )
            h = hk
        branch_sums.append(ssum)
        cache_branches.append(layer_cache)

    if len(adjs) == 2:
        scores = branch_sums[0] * branch_sums[1]
    else:
        scores = branch_sums[0]
    cache = None
    if train_mode:
        cache = {"adjs": adjs, "branches": cache_branches, "sums": branch_sums}
    return scores, cache


def backward(model: GnnModel, cache, d_scores: np.ndarray) -> dict[str, np.ndarray]:
    """Reverse-mode gradients of every parameter given d(loss)/d(scores)."""
    p = model.params
    slope = model.hyper.leaky_slope
    grads = {name: np.zeros_like(arr) for name, arr in p.items()}
    sums = cache["sums"]
    nb = len(cache["branches"])

    for b, layer_cache in enumerate(cache["branches"]):
        if nb == 2:
            d_sum = d_scores * sums[1 - b]
        else:
            d_sum = d_scores
        agg = cache["adjs"][b]
        d_h_carry = None
        for k in range(model.layers, 0, -1):
            c = layer_cache[k - 1]
            # |s| with subgradient 0 at 0
            ds = (d_sum * np.sign(c["s"]))[:, None]
            grads[f"mlp{k}_w3"] += c["t2"].T @ ds
            grads[f"mlp{k}_b3"] += ds.sum(axis=0)
            dt2 = ds @ p[f"mlp{k}_w3"].T
            du2 = dt2 * (1.0 - c["t2"] ** 2)
            grads[f"mlp{k}_w2"] += c["t1"].T @ du2
            grads[f"mlp{k}_b2"] += du2.sum(axis=0)
            dt1 = du2 @ p[f"mlp{k}_w2"].T
            du1 = dt1 * (1.0 - c["t1"] ** 2)
            grads[f"mlp{k}_w1"] += c["h"].T @ du1
            grads[f"mlp{k}_b1"] += du1.sum(axis=0)
            dh = du1 @ p[f"mlp{k}_w1"].T
            if d_h_carry is not None:
                dh = dh + d_h_carry
            if c["mask"] is not None:
                dh = dh * c["mask"]
            dz = dh * np.where(c["z"] > 0, 1.0, slope)
            grads[f"w{k}"] += c["p"].T @ dz
            dp_agg = dz @ p[f"w{k}"].T
            if k > 1:
                d_h_carry = agg.matmul(dp_agg)  # A is symmetric
    return grads


# -- pairwise ranking loss ------------------------------------------------------


def sample_pairs(num_edges: int, pair_factor: int, rng: np.random.Generator):
    """pair_factor * num_edges uniform pairs of distinct edge ids."""
    if num_edges < 2:
        raise ValueError("need at least two edges to sample ranking pairs")
    count = pair_factor * num_edges
    i = rng.integers(0, num_edges, size=count)
    j = rng.integers(0, num_edges - 1, size=count)
    j = j + (j >= i)
    return i, j


def margin_ranking_loss(s_model_i, s_model_j, s_true_i, s_true_j, margin: float = 1.0) -> float:
    """Mean hinge loss over pairs; ties in the true scores are skipped."""
    si = np.atleast_1d(np.asarray(s_model_i, dtype=np.float64))
    sj = np.atleast_1d(np.asarray(s_model_j, dtype=np.float64))
    ti = np.atleast_1d(np.asarray(s_true_i, dtype=np.float64))
    tj = np.atleast_1d(np.asarray(s_true_j, dtype=np.float64))
    y = np.sign(ti - tj)
    raw = -y * (si - sj) + margin
    per_pair = np.where((y != 0) & (raw > 0), raw, 0.0)
    return float(per_pair.mean())


def pair_loss_and_score_grad(scores, labels, pairs, margin: float = 1.0):
    """Mean margin loss over sampled pairs plus d(loss)/d(scores)."""
    i, j = pairs
    y = np.sign(labels[i] - labels[j])
    raw = -y * (scores[i] - scores[j]) + margin
    active = (y != 0) & (raw > 0)
    count = i.size
    loss = float(raw[active].sum() / count)
    d_scores = np.zeros_like(scores)
    coeff = y[active] / count
    np.add.at(d_scores, i[active], -coeff)
    np.add.at(d_scores, j[active], coeff)
    return loss, d_scores


# -- optimizer -------------------------------------------------------------------


class Adam:
    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray], lr: float):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        bc1 = 1.0 - b1 ** self.t
        bc2 = 1.0 - b2 ** self.t
        for name in sorted(params):
            g = grads[name]
            m = self.m.setdefault(name, np.zeros_like(g))
            v = self.v.setdefault(name, np.zeros_like(g))
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            params[name] -= lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


# -- per-graph feature bundle ------------------------------------------------------


@dataclass
class GraphFeatures:
    """Everything the model needs for one graph."""

    adj_degree: SparseAgg
    adj_weight: SparseAgg
    adj_plain: SparseAgg
    h0: np.ndarray
    labels: np.ndarray | None = None
    name: str = ""

    @property
    def num_edges(self) -> int:
        return self.h0.shape[0]

    def branch_adjs(self, variant: str) -> list[SparseAgg]:
        if variant == "both":
            return [self.adj_degree, self.adj_weight]
        if variant == "degree":
            return [self.adj_degree]
        if variant == "weight":
            return [self.adj_weight]
        if variant == "binary":
            return [self.adj_plain]
        raise ValueError(f"unknown variant {variant!r}")


def prepare_features(g, walk_params, labels=None, name: str = "", workers: int = 1) -> GraphFeatures:
    """Line-graph transforms plus walk embeddings for one graph."""
    from .embedding import embed_graph
    from .line_transform import (
        edge_adjacency, degree_scaled_adjacency, weight_scaled_adjacency,
        binary_adjacency,
    )

    adj = edge_adjacency(g)
    emb = embed_graph(g, walk_params, workers=workers)
    return GraphFeatures(
        adj_degree=SparseAgg(degree_scaled_adjacency(g, adj)),
        adj_weight=SparseAgg(weight_scaled_adjacency(g, adj)),
        adj_plain=SparseAgg(binary_adjacency(adj)),
        h0=emb.values,
        labels=None if labels is None else np.asarray(labels, dtype=np.float64),
        name=name,
    )


# -- training ---------------------------------------------------------------------


def _eval_scores(model: GnnModel, feats: GraphFeatures, variant: str) -> np.ndarray:
    scores, _ = forward(model, feats.branch_adjs(variant), feats.h0, train_mode=False)
    return scores


def _mean_rank_metrics(model, feat_list, variant) -> tuple[float, float]:
    from .metrics import kendall_tau, spearman_rho

    taus, rhos = [], []
    for f in feat_list:
        if f.num_edges < 2:
            continue
        s = _eval_scores(model, f, variant)
        taus.append(kendall_tau(s, f.labels))
        try:
            rhos.append(spearman_rho(s, f.labels))
        except ValueError:
            pass  # degenerate graph: all labels or all scores equal
    if not taus:
        return float("nan"), float("nan")
    return float(np.mean(taus)), float(np.mean(rhos) if rhos else np.nan)


def train(
    model: GnnModel,
    train_feats: list[GraphFeatures],
    val_feats: list[GraphFeatures] | None = None,
    config: TrainConfig | None = None,
    variant: str = "both",
    log_path=None,
    eval_every: int = 1,
) -> list[dict]:
    """Adam on the mean pair loss, one update per graph per epoch.

    Graph order is reshuffled each epoch and ranking pairs are resampled
    per (epoch, graph), all keyed off ``config.seed``.  Returns the
    per-epoch log records (also written as JSON lines when ``log_path``
    is given).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if not train_feats:
        raise ValueError("empty training set")
    usable = [f for f in train_feats if f.num_edges >= 2]
    if not usable:
        raise ValueError("no training graph has at least two edges")
    for f in usable:
        if f.labels is None:
            raise ValueError("training graphs need exact betweenness labels")
    config = config or TrainConfig()
    hyper = model.hyper
    adam = Adam(config.adam_beta1, config.adam_beta2, config.adam_eps)
    log: list[dict] = []
    log_fh = Path(log_path).open("w") if log_path is not None else None

    try:
        for epoch in range(1, hyper.epochs + 1):
            t0 = time.perf_counter()
            order = child_rng(config.seed, "epoch-order", epoch).permutation(len(usable))
            losses = []
            for gi in order.tolist():
                f = usable[gi]
                dropout_rng = child_rng(config.seed, "dropout", epoch, gi)
                pair_rng = child_rng(config.seed, "pairs", epoch, gi)
                scores, cache = forward(
                    model, f.branch_adjs(variant), f.h0,
                    train_mode=True, dropout_rng=dropout_rng,
                )
                pairs = sample_pairs(f.num_edges, hyper.pair_factor, pair_rng)
                loss, d_scores = pair_loss_and_score_grad(
                    scores, f.labels, pairs, hyper.margin
                )
                if not np.isfinite(loss):
                    raise FloatingPointError(
                        f"non-finite loss at epoch {epoch}, graph {f.name or gi}"
                    )
                grads = backward(model, cache, d_scores)
                adam.step(model.params, grads, hyper.lr)
                losses.append(loss)

            record = {
                "epoch": epoch,
                "loss": float(np.mean(losses)),
                "train_tau": None,
                "train_rho": None,
                "val_tau": None,
                "val_rho": None,
                "seconds": None,
            }
            if eval_every and (epoch % eval_every == 0 or epoch == hyper.epochs):
                tau, rho = _mean_rank_metrics(model, usable, variant)
                record["train_tau"], record["train_rho"] = tau, rho
                if val_feats:
                    vtau, vrho = _mean_rank_metrics(model, val_feats, variant)
                    record["val_tau"], record["val_rho"] = vtau, vrho
            record["seconds"] = time.perf_counter() - t0
            log.append(record)
            if log_fh is not None:
                log_fh.write(json.dumps(record) + "\n")
                log_fh.flush()
    finally:
        if log_fh is not None:
            log_fh.close()
    return log


# -- inference ---------------------------------------------------------------------


def infer_ranking(model: GnnModel, g, walk_params, variant: str = "both", workers: int = 1):
    """Embed, transform, and score a graph in eval mode.

    Returns (RankResult, timing) where timing splits the wall clock into
    the embedding stage and the transform+forward stage.
    """
    if g.num_edges > model.capacity:
        raise ValueError(
            f"graph has {g.num_edges} edges, model capacity is {model.capacity}"
        )
    t0 = time.perf_counter()
    from .embedding import embed_graph

    emb = embed_graph(g, walk_params, workers=workers)
    t1 = time.perf_counter()
    from .line_transform import (
        edge_adjacency, degree_scaled_adjacency, weight_scaled_adjacency,
        binary_adjacency,
    )

    adj = edge_adjacency(g)
    feats = GraphFeatures(
        adj_degree=SparseAgg(degree_scaled_adjacency(g, adj)),
        adj_weight=SparseAgg(weight_scaled_adjacency(g, adj)),
        adj_plain=SparseAgg(binary_adjacency(adj)),
        h0=emb.values,
    )
    scores, _ = forward(model, feats.branch_adjs(variant), feats.h0, train_mode=False)
    t2 = time.perf_counter()
    timing = {"embed_seconds": t1 - t0, "gnn_seconds": t2 - t1}
    return RankResult.from_scores(scores), timing


# -- checkpoint format ----------------------------------------------------------------

_MAGIC = "ebcrank-checkpoint"
_VERSION = 1


def save_checkpoint(model: GnnModel, path, extra_meta: dict | None = None) -> None:
    """Self-describing container: JSON header line + little-endian f8 blocks."""
    names = model.param_names()
    header = {
        "format": _MAGIC,
        "version": _VERSION,
        "layers": model.layers,
        "dim_in": model.dim_in,
        "hidden": model.hidden,
        "capacity": model.capacity,
        "hyper": asdict(model.hyper),
        "tensors": [{"name": n, "shape": list(model.params[n].shape)} for n in names],
        "meta": extra_meta or {},
    }
    with Path(path).open("wb") as fh:
        fh.write(json.dumps(header).encode() + b"\n")
        for n in names:
            fh.write(np.ascontiguousarray(model.params[n], dtype="<f8").tobytes())


def load_checkpoint(path) -> tuple[GnnModel, dict]:
    with Path(path).open("rb") as fh:
        header = json.loads(fh.readline().decode())
        if header.get("format") != _MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        if header.get("version") != _VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version")
        params = {}
        for spec in header["tensors"]:
            shape = tuple(spec["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise ValueError(f"{path}: truncated tensor {spec['name']}")
            params[spec["name"]] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
    expected = _param_shapes(header["layers"], header["dim_in"], header["hidden"])
    if {n: tuple(s) for n, s in ((k, v.shape) for k, v in params.items())} != expected:
        raise ValueError(f"{path}: tensor shapes do not match the declared model")
    model = GnnModel(
        layers=header["layers"], dim_in=header["dim_in"], hidden=header["hidden"],
        capacity=header["capacity"], hyper=GnnHyper(**header["hyper"]),
        params=params,
    )
    return model, header.get("meta", {})
