"""Command-line experiment harness.

Subcommands cover the full pipeline: ``gen`` writes a dataset of synthetic
edge-list files with a manifest, ``exact`` computes ground-truth edge
betweenness labels, ``embed`` caches walk embeddings, ``train`` fits the
ranking model, ``rank`` scores a single graph with a checkpoint, ``eval``
compares predictions against labels, ``bench`` sweeps exact-vs-model
latency, ``ablate`` re-trains across a hyperparameter axis, and
``perturb`` applies the weight / topology perturbation models.

Every command takes ``--config FILE`` (a JSON object whose keys mirror
the ExperimentSpec fields below) plus individual flag overrides, and
funnels all randomness through one ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embedding import (
    WalkParams, embed_graph, save_embedding_text, load_embedding_text,
)
from .exact import (
    EbcScores, edge_betweenness, load_scores_text, save_scores_json,
    save_scores_text,
)
from .gnn import (
    GnnHyper, GraphFeatures, SparseAgg, TrainConfig, forward, infer_ranking,
    load_checkpoint, save_checkpoint, train, xavier_init,
)
from .graphs import (
    GeneratorConfig, generate, load_edge_list,
    perturb_topology, perturb_weights, save_edge_list,
)
from .line_transform import (
    binary_adjacency, degree_scaled_adjacency, edge_adjacency,
    weight_scaled_adjacency,
)
from .metrics import kendall_tau, spearman_rho
from .seeding import child_seed

__all__ = ["ExperimentSpec", "MetricsReport", "main"]


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: generator settings, split sizes, model and walk
    hyperparameters.  The desk-scale defaults below keep a full run in
    the tens of minutes; ``--paper-scale`` switches to the full-size
    settings (5000-node graphs, 1000 training graphs, width 256)."""

    family: str = "gnp"
    node_range: tuple[int, int] = (100, 300)
    weight_range: tuple[float, float] = (0.0, 100.0)
    p_edge: float | None = None
    expected_degree: float | None = 1.2
    edge_factor_range: tuple[float, float] | None = (1.4, 1.6)
    mean_degree: int = 4
    p_rewire: float = 0.5
    train_count: int = 200
    val_count: int = 30
    test_count: int = 30
    dim: int = 64
    layers: int = 5
    capacity: int = 1024
    walk_p: float = 1.0
    walk_q: float = 2.0
    walk_length: int = 30
    walks_per_node: int = 10
    window: int = 3
    negative_samples: int = 5
    sgns_epochs: int = 5
    sgns_lr: float = 0.025
    lr: float = 5e-4
    dropout: float = 0.3
    epochs: int = 50
    margin: float = 1.0
    pair_factor: int = 20
    variant: str = "both"
    seed: int = 0

    def generator_config(self, seed: int) -> GeneratorConfig:
        if self.family == "gnp":
            return GeneratorConfig(
                family="gnp", node_range=self.node_range,
                weight_range=self.weight_range, p_edge=self.p_edge,
                expected_degree=None if self.p_edge is not None else self.expected_degree,
                seed=seed,
            )
        if self.family == "gnm":
            return GeneratorConfig(
                family="gnm", node_range=self.node_range,
                weight_range=self.weight_range,
                edge_factor_range=self.edge_factor_range, seed=seed,
            )
        return GeneratorConfig(
            family="ws", node_range=self.node_range,
            weight_range=self.weight_range, mean_degree=self.mean_degree,
            p_rewire=self.p_rewire, seed=seed,
        )

    def walk_params(self, seed: int) -> WalkParams:
        return WalkParams(
            p=self.walk_p, q=self.walk_q, walk_length=self.walk_length,
            walks_per_node=self.walks_per_node, window=self.window,
            negative_samples=self.negative_samples, dim=self.dim,
            sgns_epochs=self.sgns_epochs, sgns_lr=self.sgns_lr, seed=seed,
        )

    def hyper(self) -> GnnHyper:
        return GnnHyper(
            lr=self.lr, dropout=self.dropout, epochs=self.epochs,
            margin=self.margin, pair_factor=self.pair_factor,
        )


_PAPER_SCALE = {
    "node_range": (1000, 5000),
    "train_count": 1000,
    "val_count": 100,
    "test_count": 100,
    "dim": 256,
    "capacity": 10000,
}

_WS_PAPER_NODE_RANGE = (2000, 4000)


@dataclass
class MetricsReport:
    per_graph: list[dict] = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def finalize(self) -> "MetricsReport":
        taus = [r["tau"] for r in self.per_graph]
        # rho is undefined on degenerate graphs (zero rank variance); those
        # entries carry None and are excluded from the rho aggregate
        rhos = [r["rho"] for r in self.per_graph if r["rho"] is not None]
        self.aggregate = {
            "count": len(self.per_graph),
            "rho_count": len(rhos),
            "tau_mean": float(np.mean(taus)) if taus else None,
            "tau_std": float(np.std(taus)) if taus else None,
            "rho_mean": float(np.mean(rhos)) if rhos else None,
            "rho_std": float(np.std(rhos)) if rhos else None,
        }
        return self

    def to_json(self) -> str:
        return json.dumps(
            {"per_graph": self.per_graph, "aggregate": self.aggregate,
             "timing": self.timing},
            indent=2,
        )


# -- spec assembly -------------------------------------------------------------

_TUPLE_FIELDS = {"node_range", "weight_range", "edge_factor_range"}


def _spec_from_args(args) -> ExperimentSpec:
    explicit: dict = {}
    if getattr(args, "config", None):
        loaded = json.loads(Path(args.config).read_text())
        if not isinstance(loaded, dict):
            raise SystemExit(f"config {args.config} must be a JSON object")
        unknown = set(loaded) - {f.name for f in dataclasses.fields(ExperimentSpec)}
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        explicit.update(loaded)
    for f in dataclasses.fields(ExperimentSpec):
        flag = getattr(args, f.name, None)
        if flag is not None:
            explicit[f.name] = flag
    values: dict = {}
    if getattr(args, "paper_scale", False):
        values.update(_PAPER_SCALE)
        if explicit.get("family") == "ws":
            values["node_range"] = _WS_PAPER_NODE_RANGE
    values.update(explicit)
    for name in _TUPLE_FIELDS:
        if name in values and values[name] is not None:
            values[name] = tuple(values[name])
    return ExperimentSpec(**values)


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file with ExperimentSpec keys")
    p.add_argument("--paper-scale", action="store_true",
                   help="use the full-size experiment settings")
    p.add_argument("--family", choices=["gnp", "gnm", "ws"])
    p.add_argument("--node-range", dest="node_range", type=int, nargs=2)
    p.add_argument("--weight-range", dest="weight_range", type=float, nargs=2)
    p.add_argument("--p-edge", dest="p_edge", type=float)
    p.add_argument("--expected-degree", dest="expected_degree", type=float)
    p.add_argument("--edge-factor-range", dest="edge_factor_range", type=float, nargs=2)
    p.add_argument("--mean-degree", dest="mean_degree", type=int)
    p.add_argument("--p-rewire", dest="p_rewire", type=float)
    p.add_argument("--train-count", dest="train_count", type=int)
    p.add_argument("--val-count", dest="val_count", type=int)
    p.add_argument("--test-count", dest="test_count", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--capacity", type=int)
    p.add_argument("--walk-length", dest="walk_length", type=int)
    p.add_argument("--walks-per-node", dest="walks_per_node", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--negative-samples", dest="negative_samples", type=int)
    p.add_argument("--sgns-epochs", dest="sgns_epochs", type=int)
    p.add_argument("--sgns-lr", dest="sgns_lr", type=float)
    p.add_argument("--walk-p", dest="walk_p", type=float)
    p.add_argument("--walk-q", dest="walk_q", type=float)
    p.add_argument("--lr", type=float)
    p.add_argument("--dropout", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--margin", type=float)
    p.add_argument("--pair-factor", dest="pair_factor", type=int)
    p.add_argument("--variant", choices=["both", "degree", "weight", "binary"])
    p.add_argument("--seed", type=int)


# -- dataset helpers -------------------------------------------------------------


def _manifest_path(dataset: Path) -> Path:
    return dataset / "manifest.json"


def _load_manifest(dataset: Path) -> dict:
    path = _manifest_path(dataset)
    if not path.exists():
        raise SystemExit(f"no manifest at {path}; run 'gen' first")
    return json.loads(path.read_text())


def _wp_cache_tag(wp: WalkParams) -> str:
    payload = json.dumps(dataclasses.asdict(wp), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:8]


def _graph_features(
    dataset: Path, entry: dict, wp: WalkParams, need_labels: bool = True,
) -> GraphFeatures:
    g = load_edge_list(dataset / entry["file"])
    stem = Path(entry["file"]).stem
    labels = None
    if need_labels:
        label_file = dataset / "labels" / f"{stem}.ebc"
        if not label_file.exists():
            raise SystemExit(f"missing labels {label_file}; run 'exact' first")
        _, _, labels = load_scores_text(label_file)
        if labels.size != g.num_edges:
            raise SystemExit(f"{label_file}: label count != edge count")
    cache = dataset / "embeds" / f"{stem}.{_wp_cache_tag(wp)}.emb"
    if cache.exists():
        h0 = load_embedding_text(cache).values
    else:
        emb = embed_graph(g, wp)
        cache.parent.mkdir(parents=True, exist_ok=True)
        save_embedding_text(emb, cache)
        h0 = emb.values
    adj = edge_adjacency(g)
    return GraphFeatures(
        adj_degree=SparseAgg(degree_scaled_adjacency(g, adj)),
        adj_weight=SparseAgg(weight_scaled_adjacency(g, adj)),
        adj_plain=SparseAgg(binary_adjacency(adj)),
        h0=h0,
        labels=labels,
        name=stem,
    )


def _split_entries(manifest: dict, split: str) -> list[dict]:
    return [e for e in manifest["graphs"] if e["split"] == split]


def _features_for_split(dataset, manifest, spec, split, quiet=False):
    feats = []
    entries = _split_entries(manifest, split)
    for entry in entries:
        wp = spec.walk_params(child_seed(spec.seed, "embed", entry["index"]))
        feats.append(_graph_features(dataset, entry, wp))
        if not quiet and len(feats) % 25 == 0:
            print(f"  [{split}] features {len(feats)}/{len(entries)}", flush=True)
    return feats


# -- commands ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = _spec_from_args(args)
    out = Path(args.out)
    (out / "graphs").mkdir(parents=True, exist_ok=True)
    counts = [("train", spec.train_count), ("val", spec.val_count),
              ("test", spec.test_count)]
    entries = []
    index = 0
    for split, count in counts:
        for _ in range(count):
            seed = child_seed(spec.seed, "gen", index)
            g = generate(spec.generator_config(seed))
            rel = f"graphs/g{index:04d}.edges"
            save_edge_list(g, out / rel)
            entries.append({
                "index": index, "file": rel, "seed": seed, "split": split,
                "nodes": g.num_nodes, "edges": g.num_edges,
            })
            index += 1
    manifest = {
        "family": spec.family,
        "seed": spec.seed,
        "config": dataclasses.asdict(spec),
        "graphs": entries,
    }
    _manifest_path(out).write_text(json.dumps(manifest, indent=2))
    print(f"wrote {index} graphs to {out} (family {spec.family})")
    return 0


def cmd_exact(args) -> int:
    dataset = Path(args.dataset)
    manifest = _load_manifest(dataset)
    (dataset / "labels").mkdir(exist_ok=True)
    t0 = time.perf_counter()
    for entry in manifest["graphs"]:
        g = load_edge_list(dataset / entry["file"])
        scores = edge_betweenness(g, workers=args.workers)
        stem = Path(entry["file"]).stem
        save_scores_text(g, scores, dataset / "labels" / f"{stem}.ebc")
        if args.json:
            save_scores_json(scores, dataset / "labels" / f"{stem}.json")
    n = len(manifest["graphs"])
    print(f"labeled {n} graphs in {time.perf_counter() - t0:.1f}s")
    return 0


def cmd_embed(args) -> int:
    dataset = Path(args.dataset)
    manifest = _load_manifest(dataset)
    spec = ExperimentSpec(**_tuplify(manifest["config"]))
    t0 = time.perf_counter()
    for entry in manifest["graphs"]:
        wp = spec.walk_params(child_seed(spec.seed, "embed", entry["index"]))
        _graph_features(dataset, entry, wp, need_labels=False)
    n = len(manifest["graphs"])
    print(f"embedded {n} graphs in {time.perf_counter() - t0:.1f}s")
    return 0


def _tuplify(config: dict) -> dict:
    out = dict(config)
    for name in _TUPLE_FIELDS:
        if out.get(name) is not None:
            out[name] = tuple(out[name])
    return out


def cmd_train(args) -> int:
    dataset = Path(args.dataset)
    manifest = _load_manifest(dataset)
    overrides: dict = {}
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        unknown = set(loaded) - {f.name for f in dataclasses.fields(ExperimentSpec)}
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        overrides.update(loaded)
    overrides.update({
        k: v for k, v in (
            ("layers", args.layers), ("dim", args.dim),
            ("epochs", args.epochs), ("variant", args.variant),
            ("seed", args.seed),
        ) if v is not None
    })
    spec = dataclasses.replace(
        ExperimentSpec(**_tuplify(manifest["config"])), **_tuplify(overrides)
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    print("preparing features ...", flush=True)
    train_feats = _features_for_split(dataset, manifest, spec, "train")
    val_feats = _features_for_split(dataset, manifest, spec, "val")

    model = xavier_init(
        layers=spec.layers, dim_in=spec.dim, hidden=spec.dim,
        capacity=spec.capacity, seed=child_seed(spec.seed, "init"),
        hyper=spec.hyper(),
    )
    config = TrainConfig(seed=child_seed(spec.seed, "train"))
    log = train(
        model, train_feats, val_feats, config=config, variant=spec.variant,
        log_path=out / "train_log.jsonl", eval_every=args.eval_every,
    )
    meta = {
        "spec": dataclasses.asdict(spec),
        "variant": spec.variant,
        "dataset": str(dataset),
    }
    save_checkpoint(model, out / "model.ckpt", extra_meta=meta)
    last = log[-1]
    print(
        f"trained {spec.epochs} epochs; final loss {last['loss']:.4f}"
        + (f", val rho {last['val_rho']:.3f}" if last["val_rho"] is not None else "")
    )
    print(f"checkpoint: {out / 'model.ckpt'}")
    return 0


def cmd_rank(args) -> int:
    model, meta = load_checkpoint(args.checkpoint)
    spec = ExperimentSpec(**_tuplify(meta["spec"]))
    g = load_edge_list(args.graph)
    seed = args.seed if args.seed is not None else child_seed(spec.seed, "rank")
    wp = spec.walk_params(seed)
    result, timing = infer_ranking(
        model, g, wp, variant=meta.get("variant", "both"),
    )
    save_scores_text(g, EbcScores(result.scores), args.out)
    print(
        f"ranked {g.num_edges} edges "
        f"(embed {timing['embed_seconds']:.2f}s, gnn {timing['gnn_seconds']:.2f}s)"
    )
    return 0


def _safe_rho(x, y) -> float | None:
    try:
        return spearman_rho(x, y)
    except ValueError:
        return None  # zero rank variance


def _scores_by_edge(path) -> dict[tuple[int, int], float]:
    eu, ev, vals = load_scores_text(path)
    return {
        (int(u), int(v)) if u < v else (int(v), int(u)): float(s)
        for u, v, s in zip(eu, ev, vals)
    }


def cmd_eval(args) -> int:
    pred, lab = Path(args.predictions), Path(args.labels)
    if pred.is_dir() != lab.is_dir():
        raise SystemExit("predictions and labels must both be files or both dirs")
    if pred.is_dir():
        pairs = []
        for pfile in sorted(pred.iterdir()):
            if pfile.suffix == ".json" or not pfile.is_file():
                continue  # JSON score files are the alternate format
            lfile = lab / pfile.name
            if not lfile.exists():
                lfile = lab / (pfile.stem + ".ebc")
            if lfile.exists():
                pairs.append((pfile, lfile))
        if not pairs:
            raise SystemExit("no matching prediction/label files")
    else:
        pairs = [(pred, lab)]

    report = MetricsReport()
    for pfile, lfile in pairs:
        ps = _scores_by_edge(pfile)
        ls = _scores_by_edge(lfile)
        if set(ps) != set(ls):
            raise SystemExit(f"{pfile} and {lfile} cover different edge sets")
        keys = sorted(ps)
        x = np.array([ps[k] for k in keys])
        y = np.array([ls[k] for k in keys])
        report.per_graph.append({
            "name": pfile.stem,
            "tau": kendall_tau(x, y),
            "rho": _safe_rho(x, y),
            "edges": len(keys),
        })
    report.finalize()
    agg = report.aggregate
    rho_part = (
        f"rho {agg['rho_mean']:.4f} +- {agg['rho_std']:.4f}"
        if agg["rho_mean"] is not None else "rho undefined"
    )
    print(
        f"{agg['count']} graphs: tau {agg['tau_mean']:.4f} +- {agg['tau_std']:.4f}, "
        + rho_part
    )
    if args.out:
        Path(args.out).write_text(report.to_json())
        print(f"report: {args.out}")
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if sizes != sorted(sizes):
        raise SystemExit("--sizes must be ascending")
    spec = _spec_from_args(args)
    repeats = args.repeats
    rows = []
    for n in sizes:
        gen_cfg = dataclasses.replace(
            spec.generator_config(child_seed(spec.seed, "bench", n)),
            node_range=(n, n),
        )
        g = generate(gen_cfg)
        model = xavier_init(
            layers=spec.layers, dim_in=spec.dim, hidden=spec.dim,
            capacity=max(spec.capacity, g.num_edges),
            seed=child_seed(spec.seed, "bench-init"), hyper=spec.hyper(),
        )
        wp = spec.walk_params(child_seed(spec.seed, "bench-embed", n))
        brandes_ts, embed_ts, gnn_ts = [], [], []
        for _ in range(repeats):
            t0 = time.perf_counter()
            edge_betweenness(g)
            brandes_ts.append(time.perf_counter() - t0)
            _, timing = infer_ranking(model, g, wp)
            embed_ts.append(timing["embed_seconds"])
            gnn_ts.append(timing["gnn_seconds"])
        row = {
            "n": n, "m": g.num_edges,
            "brandes_s": float(np.median(brandes_ts)),
            "embed_s": float(np.median(embed_ts)),
            "gnn_s": float(np.median(gnn_ts)),
        }
        rows.append(row)
        print(
            f"n={n:6d} m={row['m']:6d} brandes {row['brandes_s']:8.3f}s "
            f"embed {row['embed_s']:8.3f}s gnn {row['gnn_s']:8.3f}s",
            flush=True,
        )
    with Path(args.out).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["n", "m", "brandes_s", "embed_s", "gnn_s"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"timing table: {args.out}")
    return 0


def _evaluate_model(model, feats, variant) -> MetricsReport:
    report = MetricsReport()
    for f in feats:
        if f.num_edges < 2:
            continue
        scores, _ = forward(model, f.branch_adjs(variant), f.h0)
        report.per_graph.append({
            "name": f.name,
            "tau": kendall_tau(scores, f.labels),
            "rho": _safe_rho(scores, f.labels),
            "edges": f.num_edges,
        })
    return report.finalize()


def cmd_ablate(args) -> int:
    dataset = Path(args.dataset)
    manifest = _load_manifest(dataset)
    spec = ExperimentSpec(**_tuplify(manifest["config"]))
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    if args.epochs is not None:
        spec = dataclasses.replace(spec, epochs=args.epochs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.axis == "layers":
        settings = [("layers", int(v)) for v in (args.values or "1,2,3,4,5").split(",")]
    elif args.axis == "dims":
        settings = [("dim", int(v)) for v in (args.values or "16,32,64").split(",")]
    else:
        settings = [("variant", v) for v in ["binary", "degree", "weight", "both"]]

    rows = []
    feature_cache: dict[int, tuple[list, list]] = {}
    for key, value in settings:
        sub = dataclasses.replace(spec, **{key: value})
        if sub.dim not in feature_cache:
            print(f"preparing features (dim {sub.dim}) ...", flush=True)
            feature_cache[sub.dim] = (
                _features_for_split(dataset, manifest, sub, "train"),
                _features_for_split(dataset, manifest, sub, "test"),
            )
        train_feats, test_feats = feature_cache[sub.dim]
        model = xavier_init(
            layers=sub.layers, dim_in=sub.dim, hidden=sub.dim,
            capacity=sub.capacity, seed=child_seed(sub.seed, "init", key, value),
            hyper=sub.hyper(),
        )
        config = TrainConfig(seed=child_seed(sub.seed, "train", key, value))
        t0 = time.perf_counter()
        train(model, train_feats, None, config=config, variant=sub.variant,
              eval_every=0)
        seconds = time.perf_counter() - t0
        report = _evaluate_model(model, test_feats, sub.variant)
        row = {
            "axis": args.axis, "setting": value,
            "test_tau": report.aggregate["tau_mean"],
            "test_rho": report.aggregate["rho_mean"],
            "test_tau_std": report.aggregate["tau_std"],
            "test_rho_std": report.aggregate["rho_std"],
            "train_seconds": seconds,
        }
        rows.append(row)
        print(
            f"{args.axis}={value}: test tau {row['test_tau']:.3f} "
            f"rho {row['test_rho']:.3f} ({seconds:.0f}s)",
            flush=True,
        )
    (out / f"ablation_{args.axis}.json").write_text(json.dumps(rows, indent=2))
    print(f"report: {out / f'ablation_{args.axis}.json'}")
    return 0


def cmd_perturb(args) -> int:
    g = load_edge_list(args.graph)
    if args.mode == "weights":
        out_g = perturb_weights(g, tuple(args.r_range), args.seed)
    else:
        lo = args.edge_range[0] if args.edge_range else max(1, g.num_edges - g.num_edges // 100)
        hi = args.edge_range[1] if args.edge_range else g.num_edges
        out_g = perturb_topology(g, (lo, hi), tuple(args.r_range), args.seed)
    save_edge_list(out_g, args.out)
    print(f"perturbed {args.graph} -> {args.out} ({out_g.num_edges} edges)")
    return 0


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebcrank",
        description="edge betweenness ranking: exact labels and a learned model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    _add_spec_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact", help="compute exact betweenness labels")
    p.add_argument("--dataset", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="also write JSON score files")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("embed", help="precompute walk embeddings")
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("train", help="train the ranking model on a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="JSON overrides on top of the manifest config")
    p.add_argument("--layers", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--variant", choices=["both", "degree", "weight", "binary"])
    p.add_argument("--seed", type=int)
    p.add_argument("--eval-every", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("rank", help="score one edge-list file with a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="rank-correlate predictions against labels")
    p.add_argument("--predictions", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="exact-vs-model latency sweep")
    _add_spec_flags(p)
    p.add_argument("--sizes", required=True, help="comma-separated node counts")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ablate", help="re-train across one hyperparameter axis")
    p.add_argument("--dataset", required=True)
    p.add_argument("--axis", required=True,
                   choices=["layers", "dims", "adjacency-variant"])
    p.add_argument("--values", help="comma-separated settings for layers/dims")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("perturb", help="perturb weights or topology of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["weights", "topology"], default="weights")
    p.add_argument("--r-range", dest="r_range", type=float, nargs=2,
                   default=[0.8, 1.2])
    p.add_argument("--edge-range", dest="edge_range", type=int, nargs=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_perturb)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
