"""Knowledge-graph embeddings and text recommendation.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    EmbeddingTable,
    GraphStats,
    KnowledgeGraph,
    RuntimeError,
    ValidationError,
    apply_complexity_rule,
    apply_era_rule,
    auc,
    concat_embeddings,
    cosine,
    generate_synthetic_kg,
    generate_walks,
    hits_at_k,
    mrr,
    ndcg_at_k,
    recommend,
    run_pipeline,
    sample_negatives,
    split_edges,
    train_skipgram,
)

__all__ = [
    "EmbeddingTable",
    "GraphStats",
    "KnowledgeGraph",
    "RuntimeError",
    "ValidationError",
    "apply_complexity_rule",
    "apply_era_rule",
    "auc",
    "concat_embeddings",
    "cosine",
    "generate_synthetic_kg",
    "generate_walks",
    "hits_at_k",
    "mrr",
    "ndcg_at_k",
    "recommend",
    "run_pipeline",
    "sample_negatives",
    "split_edges",
    "train_skipgram",
]
