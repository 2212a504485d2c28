from .embedders import (
    EntityExtractor,
    HashedBagOfWordsEmbedder,
    HashedTokenEmbedder,
    ReportEmbedder,
    SidecarEntityExtractor,
    SidecarReportEmbedder,
    SidecarTokenEmbedder,
    TokenEmbedder,
    VocabEntityExtractor,
    tokenize,
)
from .metrics import (
    BERTSCORE_VARIANT,
    DEFAULT_THRESHOLD,
    EvalScores,
    HallucinationReport,
    bertscore,
    cosine,
    entity_f1,
    entity_prf,
    hallucination_report,
    s_emb,
    summarize_scores,
)
from .run import EvalRun, RecordScores, check_alignment, evaluate_run, sort_ids

__all__ = [
    "BERTSCORE_VARIANT",
    "DEFAULT_THRESHOLD",
    "EntityExtractor",
    "EvalRun",
    "EvalScores",
    "HallucinationReport",
    "HashedBagOfWordsEmbedder",
    "HashedTokenEmbedder",
    "RecordScores",
    "ReportEmbedder",
    "SidecarEntityExtractor",
    "SidecarReportEmbedder",
    "SidecarTokenEmbedder",
    "TokenEmbedder",
    "VocabEntityExtractor",
    "bertscore",
    "check_alignment",
    "cosine",
    "entity_f1",
    "entity_prf",
    "evaluate_run",
    "hallucination_report",
    "s_emb",
    "sort_ids",
    "summarize_scores",
    "tokenize",
]
