"""
Similarity metrics for generated impressions.

All similarities are cosines computed in float64 from float32 embeddings.
BERTScore here is plain greedy token matching with no IDF weighting and no
baseline rescaling.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..errors import DegenerateVector, DimMismatch, EmptyEvaluation, EmptyText, InvalidThreshold
from ..index_data import EmbeddingVector
from .embedders import ReportEmbedder, TokenEmbedder

BERTSCORE_VARIANT = "greedy-max-cosine, no idf, no baseline rescaling"
DEFAULT_THRESHOLD = 0.70
CONTEXT_JOINER = " "


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity of two embeddings, clipped to [-1, 1]."""
    if a.dim != b.dim:
        raise DimMismatch(a.dim, b.dim)
    x = a.values.astype(np.float64)
    y = b.values.astype(np.float64)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise DegenerateVector("cosine is undefined for a zero vector")
    return float(np.clip(np.dot(x, y) / (nx * ny), -1.0, 1.0))


def _unit_rows(vectors: Sequence[EmbeddingVector]) -> np.ndarray:
    matrix = np.stack([v.values for v in vectors]).astype(np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateVector("token embedding is a zero vector")
    return matrix / norms[:, None]


def f1_score(precision: float, recall: float) -> float:
    total = precision + recall
    if total == 0:
        return 0.0
    return 2 * precision * recall / total


def bertscore(pred_text: str, ref_text: str, embedder: TokenEmbedder) -> Tuple[float, float, float]:
    """
    Token-level greedy matching between prediction and reference.

    Args:
        pred_text: Generated impression
        ref_text: Ground-truth impression
        embedder: Token embedder applied to both texts

    Returns:
        (precision, recall, f1)
    """
    pred = embedder.embed_tokens(pred_text)
    ref = embedder.embed_tokens(ref_text)
    if not pred:
        raise EmptyText("prediction has no tokens")
    if not ref:
        raise EmptyText("reference has no tokens")
    if pred[0].dim != ref[0].dim:
        raise DimMismatch(ref[0].dim, pred[0].dim)

    sim = _unit_rows(pred) @ _unit_rows(ref).T
    sim = np.clip(sim, -1.0, 1.0)
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    return precision, recall, f1_score(precision, recall)


def s_emb(pred_text: str, ref_text: str, embedder: ReportEmbedder) -> float:
    """Cosine similarity of report-level embeddings."""
    return cosine(embedder.embed_report(pred_text), embedder.embed_report(ref_text))


def entity_prf(pred_entities: Set[str], ref_entities: Set[str]) -> Tuple[float, float, float]:
    """
    Entity overlap precision, recall and F1.

    Both sets empty counts as a perfect match; exactly one empty scores 0.
    """
    pred = set(pred_entities)
    ref = set(ref_entities)
    if not pred and not ref:
        return 1.0, 1.0, 1.0
    if not pred or not ref:
        return 0.0, 0.0, 0.0
    overlap = len(pred & ref)
    precision = overlap / len(pred)
    recall = overlap / len(ref)
    return precision, recall, f1_score(precision, recall)


def entity_f1(pred_entities: Set[str], ref_entities: Set[str]) -> float:
    return entity_prf(pred_entities, ref_entities)[2]


@dataclass(frozen=True)
class EvalScores:
    bertscore_precision: float
    bertscore_recall: float
    bertscore_f1: float
    s_emb: float
    entity_precision: float
    entity_recall: float
    entity_f1: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def mean_of(cls, scores: Sequence["EvalScores"]) -> "EvalScores":
        if not scores:
            raise EmptyEvaluation("no records to average")
        n = len(scores)
        return cls(
            **{
                name: math.fsum(getattr(s, name) for s in scores) / n
                for name in cls.__dataclass_fields__
            }
        )


@dataclass(frozen=True)
class HallucinationReport:
    scores: Dict[str, float]
    mean: float
    minimum: float
    maximum: float
    fraction_above: float
    threshold: float = DEFAULT_THRESHOLD

    @property
    def count(self) -> int:
        return len(self.scores)

    def lowest(self, n: int = 5) -> List[Tuple[str, float]]:
        """The n least grounded records, lowest score first, ties by id."""
        ranked = sorted(self.scores.items(), key=lambda item: (item[1], item[0]))
        return ranked[:n]

    def to_dict(self) -> Dict:
        return {
            "threshold": self.threshold,
            "count": self.count,
            "mean": self.mean,
            "min": self.minimum,
            "max": self.maximum,
            "fraction_above": self.fraction_above,
            "scores": dict(self.scores),
        }


def _check_threshold(threshold: float) -> None:
    if not -1.0 <= threshold <= 1.0:
        raise InvalidThreshold(f"threshold must be within [-1, 1], got {threshold}")


def summarize_scores(
    scores: Dict[str, float], threshold: float = DEFAULT_THRESHOLD
) -> HallucinationReport:
    """Aggregate per-record grounding scores; counts scores strictly above threshold."""
    _check_threshold(threshold)
    if not scores:
        raise EmptyEvaluation("no records to score")
    values = list(scores.values())
    above = sum(1 for v in values if v > threshold)
    lo, hi = min(values), max(values)
    return HallucinationReport(
        scores=dict(scores),
        mean=min(max(math.fsum(values) / len(values), lo), hi),
        minimum=lo,
        maximum=hi,
        fraction_above=above / len(values),
        threshold=threshold,
    )


ContextLike = Union[str, Sequence[str]]


def join_context(context: ContextLike) -> str:
    if isinstance(context, str):
        return context
    return CONTEXT_JOINER.join(context)


def hallucination_report(
    records: Sequence[Tuple[str, ContextLike]],
    embedder: ReportEmbedder,
    threshold: float = DEFAULT_THRESHOLD,
    record_ids: Optional[Sequence[str]] = None,
) -> HallucinationReport:
    """
    Score how well each generation stays within its retrieved context.

    Args:
        records: (generation, context) pairs; a context given as a list of
            records is joined with single spaces
        embedder: Report embedder
        threshold: Grounding threshold in [-1, 1]
        record_ids: Ids for the records (positions when None)

    Returns:
        HallucinationReport
    """
    _check_threshold(threshold)
    if not records:
        raise EmptyEvaluation("no records to score")
    if record_ids is None:
        record_ids = range(len(records))
    ids = [str(i) for i in record_ids]
    if len(ids) != len(records):
        raise ValueError("record_ids must align with records")
    scores = {
        rid: s_emb(generation, join_context(context), embedder)
        for rid, (generation, context) in zip(ids, records)
    }
    return summarize_scores(scores, threshold)
