"""CSV export functions for evaluation results"""

import csv
import os
from typing import Any, Dict, List

from .eval import EvalRun, HallucinationReport

METRIC_FIELDS = [
    "bertscore_precision",
    "bertscore_recall",
    "bertscore_f1",
    "s_emb",
    "entity_precision",
    "entity_recall",
    "entity_f1",
]


def ensure_data_directory(data_dir: str = "data") -> str:
    """Create data directory if it doesn't exist"""
    os.makedirs(data_dir, exist_ok=True)
    return data_dir


def export_metrics(run: EvalRun, data_dir: str, filename: str = "metrics.csv") -> str:
    """
    Export per-record metrics plus a final "mean" row to CSV.

    Columns follow the usual results table: BERTScore P/R/F1, S_emb and
    entity P/R/F1, with the grounding score when contexts were evaluated.

    Args:
        run: Evaluated run
        data_dir: Output directory
        filename: CSV file name

    Returns:
        Path of the written file
    """
    filepath = os.path.join(ensure_data_directory(data_dir), filename)
    grounding = run.hallucination.scores if run.hallucination is not None else None

    fieldnames = ["record_id"] + METRIC_FIELDS
    if grounding is not None:
        fieldnames.append("grounding_s_emb")

    with open(filepath, "w", newline="", encoding="utf-8") as csvfile:
        writer = csv.DictWriter(csvfile, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for record in run.records:
            row = {"record_id": record.record_id}
            row.update({name: f"{getattr(record.scores, name):.6f}" for name in METRIC_FIELDS})
            if grounding is not None:
                row["grounding_s_emb"] = f"{grounding[record.record_id]:.6f}"
            writer.writerow(row)

        mean_row = {"record_id": "mean"}
        mean_row.update({name: f"{getattr(run.means, name):.6f}" for name in METRIC_FIELDS})
        if grounding is not None:
            mean_row["grounding_s_emb"] = f"{run.hallucination.mean:.6f}"
        writer.writerow(mean_row)

    return filepath


SWEEP_FIELDS = (
    ["corpus_level", "k", "temperature", "queries", "failed", "llm_calls"]
    + METRIC_FIELDS
    + ["grounding_mean", "grounding_above_threshold"]
)
FLOAT_FIELDS = frozenset(METRIC_FIELDS + ["grounding_mean", "grounding_above_threshold"])


def export_sweep(
    rows: List[Dict[str, Any]], data_dir: str, filename: str = "sweep.csv"
) -> str:
    """
    Export one row per sweep grid point to CSV

    Metric cells are left empty for points where every query failed.

    Args:
        rows: Rows from sweep_row(), in grid order
        data_dir: Output directory
        filename: CSV file name
    """
    filepath = os.path.join(ensure_data_directory(data_dir), filename)

    with open(filepath, "w", newline="", encoding="utf-8") as csvfile:
        writer = csv.DictWriter(csvfile, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    name: f"{value:.6f}" if name in FLOAT_FIELDS else value
                    for name, value in row.items()
                    if value is not None
                }
            )

    return filepath


def export_hallucination(
    report: HallucinationReport, data_dir: str, filename: str = "hallucination.csv"
) -> str:
    """
    Export per-record grounding scores to CSV

    Args:
        report: Hallucination report
        data_dir: Output directory
        filename: CSV file name
    """
    filepath = os.path.join(ensure_data_directory(data_dir), filename)

    with open(filepath, "w", newline="", encoding="utf-8") as csvfile:
        writer = csv.DictWriter(
            csvfile, fieldnames=["record_id", "s_emb", "above_threshold"], lineterminator="\n"
        )
        writer.writeheader()
        for record_id, score in report.scores.items():
            writer.writerow(
                {
                    "record_id": record_id,
                    "s_emb": f"{score:.6f}",
                    "above_threshold": int(score > report.threshold),
                }
            )

    return filepath
