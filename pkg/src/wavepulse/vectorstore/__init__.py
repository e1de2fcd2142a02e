"""Summary embedding store: exact k-NN search and question answering."""

from .index import (
    DEFAULT_DIM,
    EmbeddingRecord,
    IndexWriter,
    SearchHit,
    VectorIndex,
    cosine_similarity,
)
from .rag import NO_MATCH_ANSWER, RagEngine

__all__ = [
    "DEFAULT_DIM",
    "EmbeddingRecord",
    "IndexWriter",
    "SearchHit",
    "VectorIndex",
    "cosine_similarity",
    "NO_MATCH_ANSWER",
    "RagEngine",
]
