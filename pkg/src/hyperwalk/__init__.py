"""Heterogeneous network embedding in hyperbolic space.

Self-guided (meta-path-free) random walks generate node contexts; exact
Riemannian SGD on the hyperboloid model learns the embedding; built-in
evaluation covers network reconstruction and link prediction.
"""

__version__ = "0.1.0"

from .corpus import SampleCorpus, SamplerConfig, build_corpus, sample_negatives
from .evaluation import (
    auc,
    link_prediction_eval,
    make_link_split,
    reconstruct,
    region_stats,
)
from .graph import TypedGraph, degree_stats, load_graph, neighbors_by_type
from .trainer import EmbeddingTable, TrainConfig, init_embeddings, train
from .walk import WalkConfig, generate_walks, self_guided_walk, transition_distribution

__all__ = [
    "EmbeddingTable",
    "SampleCorpus",
    "SamplerConfig",
    "TrainConfig",
    "TypedGraph",
    "WalkConfig",
    "auc",
    "build_corpus",
    "degree_stats",
    "generate_walks",
    "init_embeddings",
    "link_prediction_eval",
    "load_graph",
    "make_link_split",
    "neighbors_by_type",
    "reconstruct",
    "region_stats",
    "sample_negatives",
    "self_guided_walk",
    "train",
    "transition_distribution",
]
