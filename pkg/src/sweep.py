"""
Experiment grid over corpus granularity, retrieval depth and sampling
temperature. Every grid point generates impressions for all queries and
scores them against references and against their retrieved context.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .corpus_data import Corpus
from .errors import AlignmentError, InvalidConfig
from .eval import EntityExtractor, EvalRun, ReportEmbedder, TokenEmbedder, evaluate_run
from .eval.metrics import DEFAULT_THRESHOLD
from .generation import BatchOutcome, GenerationConfig, generate_batch
from .index_data import EmbeddingVector, VectorIndex
from .llm import LlmClient
from .prompting import FewShotExample, PromptRenderer
from .vocab import VocabLists

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepPoint:
    corpus_level: str
    k: int
    temperature: float

    @property
    def label(self) -> str:
        return f"{self.corpus_level}_k{self.k}_t{self.temperature:g}"


@dataclass
class SweepResult:
    point: SweepPoint
    outcomes: List[BatchOutcome]
    run: Optional[EvalRun] = None

    @property
    def failures(self) -> Dict[str, str]:
        return {str(o.query_id): o.error for o in self.outcomes if not o.ok}

    @property
    def llm_calls(self) -> int:
        return sum(o.impression.llm_call_count for o in self.outcomes if o.ok)


def sweep_grid(
    levels: Sequence[str], k_values: Sequence[int], temperatures: Sequence[float]
) -> List[SweepPoint]:
    """Every (level, k, temperature) combination in a fixed order."""
    if not levels or not k_values or not temperatures:
        raise InvalidConfig("sweep needs at least one corpus level, k and temperature")
    grid = itertools.product(sorted(levels), sorted(set(k_values)), sorted(set(temperatures)))
    return [SweepPoint(level, k, float(t)) for level, k, t in grid]


def run_sweep(
    indexes: Mapping[str, Tuple[Corpus, VectorIndex]],
    queries: Sequence[Tuple[Union[int, str], EmbeddingVector]],
    references: Mapping[str, str],
    base_config: GenerationConfig,
    client: LlmClient,
    token_embedder: TokenEmbedder,
    report_embedder: ReportEmbedder,
    extractor: EntityExtractor,
    k_values: Sequence[int] = (1, 2, 3),
    temperatures: Sequence[float] = (0.0,),
    threshold: float = DEFAULT_THRESHOLD,
    max_in_flight: int = 4,
    renderer: Optional[PromptRenderer] = None,
    vocab: Optional[VocabLists] = None,
    shots: Optional[Sequence[FewShotExample]] = None,
    on_point: Optional[Callable[[SweepResult], None]] = None,
) -> List[SweepResult]:
    """
    Generate and evaluate impressions at every grid point.

    Args:
        indexes: (corpus, index) pairs keyed by corpus level
        queries: (query_id, embedding) pairs
        references: Reference impressions keyed by query id
        base_config: Generation settings shared by every point
        client: LLM client used for all points
        token_embedder: Embedder for BERTScore
        report_embedder: Embedder for S_emb and grounding
        extractor: Entity extractor for entity F1
        k_values: Retrieval depths
        temperatures: Sampling temperatures
        threshold: Grounding threshold
        max_in_flight: Concurrent queries per point
        on_point: Called after each point is scored

    Returns:
        One SweepResult per grid point, in grid order
    """
    query_ids = {str(qid) for qid, _ in queries}
    missing = query_ids - {str(rid) for rid in references}
    if missing:
        raise AlignmentError(missing=missing)

    results = []
    for point in sweep_grid(list(indexes), k_values, temperatures):
        corpus, index = indexes[point.corpus_level]
        config = replace(
            base_config,
            corpus_level=point.corpus_level,
            k=point.k,
            temperature=point.temperature,
        )
        outcomes = generate_batch(
            queries,
            index,
            corpus,
            config,
            client,
            max_in_flight=max_in_flight,
            renderer=renderer,
            vocab=vocab,
            shots=shots,
        )
        result = SweepResult(point, outcomes)

        succeeded = [o for o in outcomes if o.ok]
        if succeeded:
            predictions = {str(o.query_id): o.impression.text for o in succeeded}
            result.run = evaluate_run(
                predictions,
                {rid: references[rid] for rid in predictions},
                {str(o.query_id): o.impression.context for o in succeeded},
                token_embedder,
                report_embedder,
                extractor,
                threshold=threshold,
            )
        else:
            logger.warning("every query failed at %s; nothing to score", point.label)

        if on_point is not None:
            on_point(result)
        results.append(result)
    return results


def sweep_row(result: SweepResult) -> Dict[str, Any]:
    """Flat summary of one grid point; metric cells are None when nothing was scored."""
    row: Dict[str, Any] = {
        "corpus_level": result.point.corpus_level,
        "k": result.point.k,
        "temperature": result.point.temperature,
        "queries": len(result.outcomes),
        "failed": len(result.failures),
        "llm_calls": result.llm_calls,
    }
    if result.run is None:
        return row
    row.update(result.run.means.to_dict())
    grounding = result.run.hallucination
    row["grounding_mean"] = grounding.mean
    row["grounding_above_threshold"] = grounding.fraction_above
    return row
