"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
complete.  The two training-based criteria (desk-scale ranking quality and
the adjacency-variant ablation) dominate the runtime; everything else is
seconds to a few minutes.  All tolerances are fixed here, not configurable.
"""

import dataclasses
import time

import numpy as np
import pytest

import ebcrank as er
from ebcrank.embedding import WalkParams, generate_walks, second_order_prob
from ebcrank.exact import (
    edge_betweenness, edge_betweenness_exhaustive, ranking_from_scores,
)
from ebcrank.gnn import (
    GnnHyper, SparseAgg, TrainConfig, backward, forward,
    pair_loss_and_score_grad, prepare_features, sample_pairs, train,
    xavier_init, infer_ranking,
)
from ebcrank.line_transform import (
    ModifiedEdgeAdjacency, degree_scaled_adjacency, edge_adjacency,
    weight_scaled_adjacency,
)
from ebcrank.metrics import kendall_tau, spearman_rho
from ebcrank.seeding import child_rng, child_seed

from conftest import random_small_graph, star3, triangle

MASTER = 2024  # one seed drives every acceptance run


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


# -- criterion 1: oracle equivalence ------------------------------------------------


def test_criterion_01_oracle_equivalence():
    t0 = time.perf_counter()
    worst = 0.0
    checked = 0
    for seed in range(260):
        g = random_small_graph(seed, max_nodes=12)
        if g.num_edges == 0:
            continue
        fast = edge_betweenness(g).values
        slow = edge_betweenness_exhaustive(g).values
        worst = max(worst, float(np.abs(fast - slow).max()))
        checked += 1
    elapsed = time.perf_counter() - t0
    _report(
        1, checked >= 200 and worst <= 1e-9 and elapsed < 60.0,
        f"max |brandes - exhaustive| = {worst:.2e} over {checked} graphs "
        f"({elapsed:.1f}s)",
    )


# -- criterion 2: non-uniqueness fix -------------------------------------------------


def test_criterion_02_star_cycle_disambiguation():
    s, c = star3(), triangle()
    a_s, a_c = edge_adjacency(s), edge_adjacency(c)
    plain_equal = np.array_equal(a_s.toarray(), a_c.toarray())
    d_s = degree_scaled_adjacency(s, a_s).toarray()
    d_c = degree_scaled_adjacency(c, a_c).toarray()
    off = ~np.eye(3, dtype=bool)
    entries_ok = np.all(d_s[off] == 1.0 / 3.0) and np.all(d_c[off] == 1.0 / 2.0)
    _report(
        2, plain_equal and entries_ok and not np.array_equal(d_s, d_c),
        "star/cycle edge adjacencies identical; degree-scaled entries 1/3 vs 1/2",
    )


# -- criterion 3: gradient correctness ------------------------------------------------


def test_criterion_03_gradient_correctness():
    t0 = time.perf_counter()
    g = er.WeightedGraph(5, [(0, 1, 1.5), (0, 2, 2.0), (1, 2, 1.0),
                             (1, 3, 3.0), (2, 4, 1.2), (3, 4, 2.2)])
    labels = edge_betweenness(g).values
    wp = WalkParams(dim=8, walk_length=10, walks_per_node=4, sgns_epochs=2, seed=3)
    feats = prepare_features(g, wp, labels=labels)
    model = xavier_init(layers=5, dim_in=8, hidden=8, capacity=16,
                        seed=child_seed(MASTER, "gradcheck"),
                        hyper=GnnHyper(dropout=0.0))
    pairs = sample_pairs(g.num_edges, 20, child_rng(MASTER, "gc-pairs"))

    def loss_value() -> float:
        scores, _ = forward(model, feats.branch_adjs("both"), feats.h0,
                            train_mode=True)
        loss, _ = pair_loss_and_score_grad(scores, feats.labels, pairs)
        return loss

    scores, cache = forward(model, feats.branch_adjs("both"), feats.h0,
                            train_mode=True)
    _, d_scores = pair_loss_and_score_grad(scores, feats.labels, pairs)
    grads = backward(model, cache, d_scores)

    eps = 1e-4
    worst = 0.0
    for name in model.param_names():
        arr = model.params[name]
        fd = np.zeros_like(arr)
        it = np.nditer(arr, flags=["multi_index"])
        for _ in it:
            ix = it.multi_index
            orig = arr[ix]
            arr[ix] = orig + eps
            lp = loss_value()
            arr[ix] = orig - eps
            lm = loss_value()
            arr[ix] = orig
            fd[ix] = (lp - lm) / (2 * eps)
        denom = np.maximum(np.maximum(np.abs(grads[name]), np.abs(fd)), 1e-8)
        worst = max(worst, float((np.abs(grads[name] - fd) / denom).max()))
    elapsed = time.perf_counter() - t0
    _report(
        3, worst < 1e-4 and elapsed < 60.0,
        f"max relative gradient error {worst:.2e} over all parameter tensors "
        f"({elapsed:.1f}s)",
    )


# -- criteria 4 and 6 need a full desk-scale training run ------------------------------


def _build_dataset(family: str, count: int, prefix: tuple = ()):
    if family == "gnp":
        cfg = er.GeneratorConfig(family="gnp", node_range=(100, 300),
                                 expected_degree=1.2, weight_range=(0.0, 100.0))
    else:
        cfg = er.GeneratorConfig(family="gnm", node_range=(100, 300),
                                 edge_factor_range=(1.4, 1.6),
                                 weight_range=(0.0, 100.0))
    feats = []
    for i in range(count):
        g = er.generate(
            dataclasses.replace(cfg, seed=child_seed(MASTER, *prefix, "gen", i))
        )
        labels = edge_betweenness(g).values
        wp = WalkParams(dim=64, seed=child_seed(MASTER, *prefix, "embed", i))
        feats.append(prepare_features(g, wp, labels=labels, name=f"{family}-{i}"))
    return feats


@pytest.fixture(scope="module")
def desk_gnp_run():
    feats = _build_dataset("gnp", 230, prefix=("desk-gnp",))
    train_f, test_f = feats[:200], feats[200:]
    model = xavier_init(layers=5, dim_in=64, hidden=64, capacity=1024,
                        seed=child_seed(MASTER, "desk-gnp", "init"))
    log = train(model, train_f, None,
                config=TrainConfig(seed=child_seed(MASTER, "desk-gnp", "train")),
                eval_every=0)
    taus, rhos = [], []
    for f in test_f:
        scores, _ = forward(model, f.branch_adjs("both"), f.h0)
        taus.append(kendall_tau(scores, f.labels))
        rhos.append(spearman_rho(scores, f.labels))
    return {
        "log": log,
        "tau": float(np.mean(taus)),
        "rho": float(np.mean(rhos)),
    }


def test_criterion_04_desk_scale_ranking_quality(desk_gnp_run):
    tau, rho = desk_gnp_run["tau"], desk_gnp_run["rho"]
    _report(
        4, rho >= 0.70 and tau >= 0.55,
        f"held-out GNP (200 train / 30 test): mean rho {rho:.3f} (>= 0.70), "
        f"mean tau {tau:.3f} (>= 0.55)",
    )


# -- criterion 5: adjacency-variant ablation --------------------------------------------


@pytest.fixture(scope="module")
def gnm_ablation():
    # seed paths intentionally have no dataset prefix: they reproduce the
    # validated reference run of this ablation bit-for-bit
    feats = _build_dataset("gnm", 230)
    train_f, test_f = feats[:200], feats[200:]
    out = {"variants": {}, "train": train_f, "test": test_f}
    for variant in ("binary", "degree", "weight", "both"):
        model = xavier_init(
            layers=5, dim_in=64, hidden=64, capacity=1024,
            seed=child_seed(MASTER, "init", variant),
        )
        log = train(
            model, train_f, None, variant=variant,
            config=TrainConfig(seed=child_seed(MASTER, "train", variant)),
            eval_every=0,
        )
        rhos = [
            spearman_rho(forward(model, f.branch_adjs(variant), f.h0)[0], f.labels)
            for f in test_f
        ]
        out["variants"][variant] = {"rho": float(np.mean(rhos)), "log": log}
    return out


def test_criterion_05_adjacency_variant_ordering(gnm_ablation):
    rho = {k: v["rho"] for k, v in gnm_ablation["variants"].items()}
    leaders_min = min(rho["both"], rho["weight"])
    others_max = max(rho["degree"], rho["binary"])
    ok = rho["both"] >= rho["weight"] and leaders_min - others_max >= 0.1
    _report(
        5, ok,
        f"test rho: both {rho['both']:.3f} >= weight-only {rho['weight']:.3f}; "
        f"leaders exceed degree-only {rho['degree']:.3f} / plain {rho['binary']:.3f} "
        f"by {leaders_min - others_max:.3f} (>= 0.1)",
    )


def test_layers_ablation_trend(gnm_ablation):
    """Supplementary sweep check: a 5-layer model beats a 1-layer model."""
    train_f, test_f = gnm_ablation["train"], gnm_ablation["test"]
    shallow = xavier_init(
        layers=1, dim_in=64, hidden=64, capacity=1024,
        seed=child_seed(MASTER, "init", "layers", 1),
    )
    train(shallow, train_f, None,
          config=TrainConfig(seed=child_seed(MASTER, "train", "layers", 1)),
          eval_every=0)
    rho_1 = float(np.mean([
        spearman_rho(forward(shallow, f.branch_adjs("both"), f.h0)[0], f.labels)
        for f in test_f
    ]))
    rho_5 = gnm_ablation["variants"]["both"]["rho"]
    print(f"\n[layers sweep] 5-layer rho {rho_5:.3f} vs 1-layer rho {rho_1:.3f}")
    assert rho_5 >= rho_1


# -- criterion 6: training-loss descent ---------------------------------------------------


def test_criterion_06_training_loss_descent(desk_gnp_run, gnm_ablation):
    runs = [("desk-gnp", desk_gnp_run["log"])]
    runs += [(f"gnm-{k}", v["log"]) for k, v in gnm_ablation["variants"].items()]
    details = []
    ok = True
    for name, log in runs:
        first, last = log[0]["loss"], log[-1]["loss"]
        ok = ok and last < first
        details.append(f"{name} {first:.3f}->{last:.3f}")
    _report(6, ok, "final-epoch mean loss below first-epoch on every run: "
            + "; ".join(details))


# -- criterion 7: latency trend ------------------------------------------------------------


def test_criterion_07_latency_ratio_decreases():
    sizes = [200, 500, 1000, 2000, 4000]
    wp_base = WalkParams(dim=64, seed=child_seed(MASTER, "bench-embed"))
    ratios = []
    rows = []
    for n in sizes:
        cfg = er.GeneratorConfig(family="gnp", node_range=(n, n),
                                 expected_degree=1.2, weight_range=(0.0, 100.0),
                                 seed=child_seed(MASTER, "bench", n))
        g = er.generate(cfg)
        model = xavier_init(layers=5, dim_in=64, hidden=64,
                            capacity=max(1024, g.num_edges),
                            seed=child_seed(MASTER, "bench-init"))
        brandes_ts, infer_ts = [], []
        for _ in range(3):
            t0 = time.perf_counter()
            edge_betweenness(g)
            brandes_ts.append(time.perf_counter() - t0)
            _, timing = infer_ranking(model, g, wp_base)
            infer_ts.append(timing["embed_seconds"] + timing["gnn_seconds"])
        brandes_med = float(np.median(brandes_ts))
        infer_med = float(np.median(infer_ts))
        ratios.append(infer_med / brandes_med)
        rows.append((n, brandes_med, infer_med))
        print(f"\n  n={n}: brandes {brandes_med:.3f}s, inference {infer_med:.3f}s, "
              f"ratio {ratios[-1]:.1f}", flush=True)
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    brandes_monotone = all(
        a[1] <= b[1] for a, b in zip(rows, rows[1:])
    )
    _report(7, decreasing and brandes_monotone,
            "inference/brandes ratio strictly decreasing ("
            + ", ".join(f"{r:.1f}" for r in ratios)
            + ") and exact-route time non-decreasing in n")


# -- criterion 8: metric correctness ----------------------------------------------------------


def _tau_bruteforce(x, y) -> float:
    n = len(x)
    con = dis = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = np.sign(x[i] - x[j])
            b = np.sign(y[i] - y[j])
            if a == 0 or b == 0:
                continue
            if a == b:
                con += 1
            else:
                dis += 1
    return (con - dis) / (n * (n - 1) / 2)


def _rho_bruteforce(x, y) -> float:
    def ranks(a):
        out = np.empty(len(a))
        for i, v in enumerate(a):
            less = sum(1 for u in a if u < v)
            eq = sum(1 for u in a if u == v)
            out[i] = less + (eq + 1) / 2.0
        return out

    rx, ry = ranks(x), ranks(y)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    return float((dx @ dy) / np.sqrt((dx @ dx) * (dy @ dy)))


def test_criterion_08_metric_oracles():
    rng = child_rng(MASTER, "metrics")
    worst_tau = worst_rho = 0.0
    checked = 0
    while checked < 1000:
        n = int(rng.integers(2, 51))
        if rng.random() < 0.5:
            x = rng.integers(0, max(2, n // 2), n).astype(float)  # heavy ties
            y = rng.integers(0, max(2, n // 2), n).astype(float)
        else:
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
        worst_tau = max(worst_tau, abs(kendall_tau(x, y) - _tau_bruteforce(x, y)))
        if not (np.all(x == x[0]) or np.all(y == y[0])):
            worst_rho = max(worst_rho, abs(spearman_rho(x, y) - _rho_bruteforce(x, y)))
        checked += 1
    ident = rng.standard_normal(37)
    identity_exact = kendall_tau(ident, ident) == 1.0 and spearman_rho(ident, ident) == 1.0
    _report(
        8, worst_tau <= 1e-12 and worst_rho <= 1e-12 and identity_exact,
        f"tau/rho vs brute-force oracles over 1000 pairs: max diff "
        f"{worst_tau:.1e} / {worst_rho:.1e}; identity gives exactly 1.0",
    )


# -- criterion 9: walk-law correctness ----------------------------------------------------------


def test_criterion_09_walk_transition_law():
    g = er.WeightedGraph(5, [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 1.5), (1, 3, 1.0),
                             (2, 4, 2.5), (3, 4, 1.0), (0, 3, 2.0)])
    worst_overall = 0.0
    details = []
    for p, q in ((1.0, 1.0), (1.0, 2.0), (4.0, 0.25)):
        params = WalkParams(p=p, q=q, walk_length=2001, walks_per_node=101,
                            window=3, dim=8, seed=child_seed(MASTER, "walklaw", p, q))
        corpus = generate_walks(g, params)
        steps = sum(max(len(w) - 2, 0) for w in corpus.walks)
        assert steps >= 1_000_000
        counts: dict[tuple[int, int], dict[int, int]] = {}
        for walk in corpus.walks:
            for t, v, u in zip(walk, walk[1:], walk[2:]):
                ctx = counts.setdefault((t, v), {})
                ctx[u] = ctx.get(u, 0) + 1
        worst = 0.0
        for (t, v), ctx in counts.items():
            total = sum(ctx.values())
            nbrs, _, _ = g.neighbors(v)
            for u in nbrs.tolist():
                want = second_order_prob(g, t, v, u, p, q)
                got = ctx.get(u, 0) / total
                worst = max(worst, abs(got - want))
        details.append(f"(p={p:g},q={q:g}): max dev {worst:.4f} over {steps} steps")
        worst_overall = max(worst_overall, worst)
    _report(9, worst_overall < 1e-2, "; ".join(details))


# -- criterion 10: invariance suite ---------------------------------------------------------------


def _permuted_agg(agg: SparseAgg, perm: np.ndarray, dim: int) -> SparseAgg:
    r = np.concatenate([np.repeat(perm[rows], cm.shape[1])
                        for rows, cm, _ in agg.groups])
    c = np.concatenate([perm[cm].ravel() for _, cm, _ in agg.groups])
    v = np.concatenate([vm.ravel() for _, _, vm in agg.groups])
    order = np.lexsort((c, r))
    return SparseAgg(ModifiedEdgeAdjacency(dim=dim, rows=r[order], cols=c[order],
                                           vals=v[order]))


def test_criterion_10_invariance_suite():
    checks = []

    # permutation equivariance of the forward pass, exact
    wp = WalkParams(dim=8, walk_length=10, walks_per_node=4, sgns_epochs=2, seed=5)
    g = random_small_graph(17)
    feats = prepare_features(g, wp)
    model = xavier_init(layers=5, dim_in=8, hidden=8, capacity=1024,
                        seed=child_seed(MASTER, "inv-init"))
    scores, _ = forward(model, feats.branch_adjs("both"), feats.h0)
    perm = child_rng(MASTER, "inv-perm").permutation(g.num_edges)
    inv = np.argsort(perm)
    adjs_p = [_permuted_agg(a, perm, g.num_edges)
              for a in feats.branch_adjs("both")]
    scores_p, _ = forward(model, adjs_p, feats.h0[inv])
    checks.append(("forward permutation equivariance",
                   np.array_equal(scores_p, scores[inv])))

    # uniform weight scaling: exact betweenness values and ranking unchanged
    base = edge_betweenness(g).values
    scaled = edge_betweenness(g.with_weights(g.weight * 2.0)).values
    checks.append(("edge betweenness invariant under 2x weights",
                   np.array_equal(base, scaled)))
    checks.append(("ranking equal under 4x weights", np.array_equal(
        ranking_from_scores(base),
        ranking_from_scores(edge_betweenness(g.with_weights(g.weight * 4.0)).values),
    )))

    # weight-scaled adjacency entries scale by exactly 1/c for c a power of two
    adj = edge_adjacency(g)
    w_base = weight_scaled_adjacency(g, adj).vals
    for c in (2.0, 0.5):
        w_scaled = weight_scaled_adjacency(g.with_weights(g.weight * c), adj).vals
        checks.append((f"weight-scaled adjacency 1/{c:g} scaling",
                       np.array_equal(w_scaled, w_base / c)))

    # determinism of every seeded pipeline stage
    cfg = er.GeneratorConfig(family="ws", node_range=(30, 30), mean_degree=4,
                             p_rewire=0.5, seed=child_seed(MASTER, "inv-gen"))
    checks.append(("generator determinism",
                   er.generate(cfg).edges() == er.generate(cfg).edges()))
    e1 = er.embed_graph(g, wp).values
    e2 = er.embed_graph(g, wp).values
    checks.append(("embedding determinism", np.array_equal(e1, e2)))

    def tiny_train():
        feats_t = []
        for s in (31, 32, 33):
            gt = random_small_graph(s)
            if gt.num_edges < 2:
                continue
            feats_t.append(prepare_features(gt, wp, labels=edge_betweenness(gt).values))
        m = xavier_init(layers=2, dim_in=8, hidden=8, capacity=1024,
                        seed=child_seed(MASTER, "inv-train-init"),
                        hyper=GnnHyper(epochs=3))
        train(m, feats_t, config=TrainConfig(seed=child_seed(MASTER, "inv-train")),
              eval_every=0)
        return m

    m1, m2 = tiny_train(), tiny_train()
    checks.append(("training determinism", all(
        np.array_equal(m1.params[k], m2.params[k]) for k in m1.param_names()
    )))
    r1, _ = infer_ranking(m1, g, wp)
    r2, _ = infer_ranking(m1, g, wp)
    checks.append(("inference determinism",
                   np.array_equal(r1.scores, r2.scores)
                   and np.array_equal(r1.ranking, r2.ranking)))

    failed = [name for name, ok in checks if not ok]
    _report(10, not failed,
            f"{len(checks)} exact invariance/determinism checks"
            + (f"; FAILED: {failed}" if failed else " all hold"))
