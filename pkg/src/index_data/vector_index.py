"""
Exact top-K dot-product retrieval over a corpus embedding matrix.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..corpus_data.records import Corpus
from ..errors import CorpusEmbeddingMismatch, DimMismatch, InvalidK
from .embeddings_io import EmbeddingSet, read_embeddings, write_embeddings
from .vectors import EmbeddingVector, normalize, normalize_rows

logger = logging.getLogger(__name__)

# rows scored per block; bounds the float64 working copy
SCORE_BLOCK_ROWS = 65536


@dataclass(frozen=True)
class RetrievalResult:
    record_id: int
    score: float
    rank: int

    def to_dict(self):
        return {"record_id": self.record_id, "score": self.score, "rank": self.rank}


@dataclass(frozen=True, eq=False)
class VectorIndex:
    """Immutable embedding matrix whose row i belongs to record_ids[i]."""

    record_ids: np.ndarray
    matrix: np.ndarray
    normalized: bool

    def __post_init__(self):
        ids = np.ascontiguousarray(self.record_ids, dtype=np.int64)
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float32)
        if matrix.ndim != 2 or matrix.shape[0] != ids.shape[0]:
            raise CorpusEmbeddingMismatch("index rows and record_ids are not aligned")
        ids.setflags(write=False)
        matrix.setflags(write=False)
        object.__setattr__(self, "record_ids", ids)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def count(self) -> int:
        return int(self.matrix.shape[0])

    def __len__(self) -> int:
        return self.count


def build_index(corpus: Corpus, embeddings: EmbeddingSet, normalize: bool = True) -> VectorIndex:
    """
    Align corpus embeddings to corpus order and freeze them into an index.

    Args:
        corpus: Corpus whose records the embeddings describe
        embeddings: Embeddings read from an embedding file
        normalize: Scale every row to unit norm (dot product = cosine)

    Returns:
        VectorIndex with rows in corpus record order
    """
    emb_ids = [int(i) for i in embeddings.record_ids]
    corpus_ids = corpus.record_ids

    if len(emb_ids) != len(corpus_ids):
        raise CorpusEmbeddingMismatch(
            f"corpus has {len(corpus_ids)} records but {len(emb_ids)} embeddings were supplied",
            missing=set(corpus_ids) - set(emb_ids),
            extra=set(emb_ids) - set(corpus_ids),
        )
    if len(set(emb_ids)) != len(emb_ids) or set(emb_ids) != set(corpus_ids):
        raise CorpusEmbeddingMismatch(
            "embedding record_ids do not match corpus record_ids",
            missing=set(corpus_ids) - set(emb_ids),
            extra=set(emb_ids) - set(corpus_ids),
        )

    position = {rid: i for i, rid in enumerate(emb_ids)}
    order = np.array([position[rid] for rid in corpus_ids], dtype=np.int64)
    matrix = embeddings.matrix[order] if len(order) else embeddings.matrix

    if normalize and not embeddings.normalized and len(order):
        matrix = normalize_rows(matrix)

    index = VectorIndex(
        record_ids=np.asarray(corpus_ids, dtype=np.int64),
        matrix=matrix,
        normalized=bool(normalize or embeddings.normalized),
    )
    logger.info("Built index over %d records (dim %d)", index.count, index.dim)
    return index


def _prepare_query(index: VectorIndex, query: EmbeddingVector, k: int) -> EmbeddingVector:
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    if index.count and query.dim != index.dim:
        raise DimMismatch(index.dim, query.dim)
    # unit rows need a unit query for scores to be cosines in [-1, 1]
    if index.normalized and not query.normalized:
        return normalize(query)
    return query


def dot_scores(index: VectorIndex, query: EmbeddingVector) -> np.ndarray:
    """Scores s.x for every row, accumulated in float64.

    Each row is reduced independently (elementwise product then sum), so a
    row's score does not depend on its position in the matrix.
    """
    q = query.values.astype(np.float64)
    scores = np.empty(index.count, dtype=np.float64)
    for start in range(0, index.count, SCORE_BLOCK_ROWS):
        block = index.matrix[start : start + SCORE_BLOCK_ROWS].astype(np.float64)
        scores[start : start + block.shape[0]] = (block * q).sum(axis=1)
    return scores


def _results(index: VectorIndex, scores: np.ndarray, positions) -> List[RetrievalResult]:
    return [
        RetrievalResult(record_id=int(index.record_ids[p]), score=float(scores[p]), rank=rank)
        for rank, p in enumerate(positions)
    ]


def top_k(index: VectorIndex, query: EmbeddingVector, k: int) -> List[RetrievalResult]:
    """Exact top-k by dot product; ties broken by ascending record_id.

    Against a normalized index the query is normalized too, so scores are
    cosine similarities.
    """
    query = _prepare_query(index, query, k)
    if index.count == 0:
        return []

    scores = dot_scores(index, query)
    k = min(k, index.count)

    if k < index.count:
        # k-th largest score; keep every row tied with it so the id tie-break is exact
        kth = np.partition(scores, index.count - k)[index.count - k]
        candidates = np.flatnonzero(scores >= kth)
    else:
        candidates = np.arange(index.count)

    order = np.lexsort((index.record_ids[candidates], -scores[candidates]))
    return _results(index, scores, candidates[order][:k])


def top_k_bruteforce(index: VectorIndex, query: EmbeddingVector, k: int) -> List[RetrievalResult]:
    """Reference oracle for top_k: full scan and full sort."""
    query = _prepare_query(index, query, k)
    if index.count == 0:
        return []

    scores = dot_scores(index, query)
    ranked = sorted(
        range(index.count), key=lambda p: (-scores[p], int(index.record_ids[p]))
    )
    return _results(index, scores, ranked[: min(k, index.count)])


def save_index(index: VectorIndex, path: Union[str, Path]) -> None:
    write_embeddings(
        path, EmbeddingSet(index.record_ids.astype(np.uint64), index.matrix, index.normalized)
    )


def load_index(
    path: Union[str, Path], corpus: Corpus, normalize: Optional[bool] = None
) -> VectorIndex:
    """Load a saved index and align it with corpus; keeps the stored normalization by default."""
    embeddings = read_embeddings(path)
    if normalize is None:
        normalize = embeddings.normalized
    return build_index(corpus, embeddings, normalize=normalize)
