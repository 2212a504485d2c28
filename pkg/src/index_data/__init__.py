from .embeddings_io import EmbeddingSet, read_embeddings, write_embeddings
from .vector_index import (
    RetrievalResult,
    VectorIndex,
    build_index,
    load_index,
    save_index,
    top_k,
    top_k_bruteforce,
)
from .vectors import EmbeddingVector, normalize

__all__ = [
    "EmbeddingSet",
    "EmbeddingVector",
    "RetrievalResult",
    "VectorIndex",
    "build_index",
    "load_index",
    "normalize",
    "read_embeddings",
    "save_index",
    "top_k",
    "top_k_bruteforce",
    "write_embeddings",
]
