"""Exact weighted edge betweenness centrality and a learned ranking model.

The package computes exact edge betweenness on weighted undirected graphs
(the slow, trustworthy route) and trains a twin-branch GNN over the
line-graph structure to approximate the *ranking* of those scores quickly
on unseen graphs.
"""

from .graphs import (
    WeightedGraph,
    GeneratorConfig,
    generate,
    load_edge_list,
    save_edge_list,
    perturb_weights,
    perturb_topology,
)
from .exact import (
    EbcScores,
    edge_betweenness,
    edge_betweenness_exhaustive,
    ranking_from_scores,
)
from .line_transform import (
    EdgeAdjacency,
    ModifiedEdgeAdjacency,
    edge_adjacency,
    degree_scaled_adjacency,
    weight_scaled_adjacency,
    binary_adjacency,
)
from .embedding import (
    WalkParams,
    WalkCorpus,
    EmbeddingMatrix,
    first_order_prob,
    second_order_prob,
    generate_walks,
    train_skipgram,
    edge_embeddings,
    embed_graph,
)
from .gnn import (
    GnnHyper,
    GnnModel,
    TrainConfig,
    RankResult,
    GraphFeatures,
    SparseAgg,
    xavier_init,
    forward,
    backward,
    sample_pairs,
    margin_ranking_loss,
    prepare_features,
    train,
    infer_ranking,
    save_checkpoint,
    load_checkpoint,
)
from .metrics import (
    RankCorrelation,
    GraphStats,
    kendall_tau,
    spearman_rho,
    rank_correlation,
    graph_stats,
)

__version__ = "0.1.0"
