import dataclasses

import numpy as np
import pytest

from ebcrank import GeneratorConfig, WeightedGraph, generate
from ebcrank.seeding import child_seed


def star3(weights=(1.0, 1.0, 1.0)) -> WeightedGraph:
    """Three-point star: center 0, leaves 1..3."""
    return WeightedGraph(4, [(0, i + 1, w) for i, w in enumerate(weights)])


def triangle(weights=(1.0, 1.0, 1.0)) -> WeightedGraph:
    return WeightedGraph(3, [(0, 1, weights[0]), (0, 2, weights[1]), (1, 2, weights[2])])


def path_graph(n: int, weights=None) -> WeightedGraph:
    weights = weights or [1.0] * (n - 1)
    return WeightedGraph(n, [(i, i + 1, w) for i, w in enumerate(weights)])


def barbell(k: int = 4, bridge_weight: float = 1.0) -> WeightedGraph:
    """Two k-cliques joined by a single edge."""
    edges = []
    for block in (0, k):
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((block + i, block + j, 1.0))
    edges.append((k - 1, k, bridge_weight))
    return WeightedGraph(2 * k, edges)


def random_small_graph(seed: int, max_nodes: int = 12) -> WeightedGraph:
    """One random graph from a rotating family, bounded node count."""
    family = ("gnp", "gnm", "ws")[seed % 3]
    rng = np.random.default_rng(child_seed(seed, "test-graph"))
    n = int(rng.integers(4, max_nodes + 1))
    if family == "gnp":
        cfg = GeneratorConfig(family="gnp", node_range=(n, n),
                              p_edge=float(rng.uniform(0.2, 0.6)),
                              weight_range=(0.1, 10.0), seed=seed)
    elif family == "gnm":
        m = int(rng.integers(n - 1, min(2 * n, n * (n - 1) // 2) + 1))
        cfg = GeneratorConfig(family="gnm", node_range=(n, n),
                              edge_factor_range=(m / n, m / n),
                              weight_range=(0.1, 10.0), seed=seed)
    else:
        n = max(n, 6)
        cfg = GeneratorConfig(family="ws", node_range=(n, n), mean_degree=4,
                              p_rewire=0.3, weight_range=(0.1, 10.0), seed=seed)
    return generate(cfg)


@pytest.fixture
def tiny_graph() -> WeightedGraph:
    return WeightedGraph(4, [(0, 1, 1.0), (0, 2, 2.5), (1, 2, 2.0), (2, 3, 1.0)])
