"""
Run-level evaluation: per-record metrics for aligned predictions and
references, their means, and the grounding block when contexts are given.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

from ..errors import AlignmentError, EmptyEvaluation
from .embedders import EntityExtractor, ReportEmbedder, TokenEmbedder
from .metrics import (
    BERTSCORE_VARIANT,
    DEFAULT_THRESHOLD,
    EvalScores,
    HallucinationReport,
    bertscore,
    entity_prf,
    hallucination_report,
    s_emb,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecordScores:
    record_id: str
    scores: EvalScores

    def to_dict(self) -> Dict:
        return {"record_id": self.record_id, **self.scores.to_dict()}


@dataclass
class EvalRun:
    records: List[RecordScores]
    means: EvalScores
    hallucination: Optional[HallucinationReport] = None
    bertscore_variant: str = BERTSCORE_VARIANT

    def to_dict(self) -> Dict:
        data = {
            "bertscore_variant": self.bertscore_variant,
            "count": len(self.records),
            "means": self.means.to_dict(),
            "records": [r.to_dict() for r in self.records],
        }
        if self.hallucination is not None:
            data["hallucination"] = self.hallucination.to_dict()
        return data

    def write_json(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


def check_alignment(predictions: Mapping, references: Mapping) -> List[str]:
    """Sorted common ids; raises AlignmentError when the id sets differ."""
    pred_ids = {str(k) for k in predictions}
    ref_ids = {str(k) for k in references}
    if pred_ids != ref_ids:
        raise AlignmentError(missing=ref_ids - pred_ids, extra=pred_ids - ref_ids)
    return sort_ids(pred_ids)


def _id_sort_key(record_id: str):
    return (0, int(record_id), "") if record_id.isdigit() else (1, 0, record_id)


def sort_ids(record_ids: Iterable[str]) -> List[str]:
    """Numeric ids in numeric order, then the rest lexically."""
    return sorted((str(i) for i in record_ids), key=_id_sort_key)


def score_record(
    prediction: str,
    reference: str,
    token_embedder: TokenEmbedder,
    report_embedder: ReportEmbedder,
    extractor: EntityExtractor,
) -> EvalScores:
    precision, recall, f1 = bertscore(prediction, reference, token_embedder)
    ent_p, ent_r, ent_f1 = entity_prf(extractor.extract(prediction), extractor.extract(reference))
    return EvalScores(
        bertscore_precision=precision,
        bertscore_recall=recall,
        bertscore_f1=f1,
        s_emb=s_emb(prediction, reference, report_embedder),
        entity_precision=ent_p,
        entity_recall=ent_r,
        entity_f1=ent_f1,
    )


def evaluate_run(
    predictions: Mapping[str, str],
    references: Mapping[str, str],
    contexts: Optional[Mapping[str, Sequence[str]]],
    token_embedder: TokenEmbedder,
    report_embedder: ReportEmbedder,
    extractor: EntityExtractor,
    threshold: float = DEFAULT_THRESHOLD,
    workers: int = 1,
) -> EvalRun:
    """
    Score every prediction against its reference.

    Args:
        predictions: Generated impressions keyed by record id
        references: Ground-truth impressions keyed by record id
        contexts: Retrieved context records keyed by record id, or None to
            skip the grounding block
        token_embedder: Embedder for BERTScore
        report_embedder: Embedder for S_emb and grounding scores
        extractor: Entity extractor for entity F1
        threshold: Grounding threshold
        workers: Parallel workers when every component supports it

    Returns:
        EvalRun with records in id order
    """
    predictions = {str(k): v for k, v in predictions.items()}
    references = {str(k): v for k, v in references.items()}
    ids = check_alignment(predictions, references)
    if not ids:
        raise EmptyEvaluation("no records to evaluate")

    def one(record_id: str) -> RecordScores:
        return RecordScores(
            record_id,
            score_record(
                predictions[record_id],
                references[record_id],
                token_embedder,
                report_embedder,
                extractor,
            ),
        )

    parallel = workers > 1 and all(
        getattr(c, "supports_concurrency", False)
        for c in (token_embedder, report_embedder, extractor)
    )
    if parallel:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, ids))
    else:
        records = [one(rid) for rid in ids]

    hallucination = None
    if contexts is not None:
        contexts = {str(k): v for k, v in contexts.items()}
        missing = [rid for rid in ids if rid not in contexts]
        if missing:
            raise AlignmentError(missing=missing)
        hallucination = hallucination_report(
            [(predictions[rid], contexts[rid]) for rid in ids],
            report_embedder,
            threshold,
            record_ids=ids,
        )

    logger.info("evaluated %d records", len(records))
    return EvalRun(
        records=records,
        means=EvalScores.mean_of([r.scores for r in records]),
        hallucination=hallucination,
    )
