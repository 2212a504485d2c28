"""
Corpus ingestion, sentence splitting, deduplication and persistence.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from ..errors import EmptyCorpus, InvalidRecord, WrongLevel
from .records import (
    LEVELS,
    REPORT,
    SENTENCE,
    Corpus,
    CorpusRecord,
    normalize_whitespace,
)
from .splitter import split_sentences

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _parse_report_line(line: str, line_no: int) -> Tuple[str, str]:
    """Return (study_id, text) from a JSON object line or a study_id<TAB>text line."""
    if line.lstrip().startswith("{"):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise InvalidRecord(f"line {line_no}: invalid JSON: {e}") from e
        if "study_id" not in obj:
            raise InvalidRecord(f"line {line_no}: missing study_id")
        text = obj.get("text", obj.get("impression"))
        if text is None:
            raise InvalidRecord(f"line {line_no}: missing text/impression")
        return str(obj["study_id"]), str(text)

    if "\t" not in line:
        raise InvalidRecord(f"line {line_no}: expected 'study_id<TAB>text' or a JSON object")
    study_id, text = line.split("\t", 1)
    return study_id.strip(), text


def ingest_reports(source: PathLike) -> Corpus:
    """
    Read a line-delimited report file into a report-level corpus.

    Args:
        source: Path to the reports file (JSONL or study_id<TAB>text lines)

    Returns:
        Report-level Corpus with record_ids assigned from 0 in input order
    """
    records: List[CorpusRecord] = []
    blank = 0

    with open(source, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            study_id, text = _parse_report_line(line, line_no)
            if not normalize_whitespace(text):
                blank += 1
                logger.warning("Skipping blank report on line %d (study %s)", line_no, study_id)
                continue
            records.append(
                CorpusRecord(
                    record_id=len(records), study_id=study_id, level=REPORT, text=text
                )
            )

    if not records:
        raise EmptyCorpus(f"no reports found in {source}")

    if blank:
        logger.warning("Skipped %d blank report(s) while ingesting %s", blank, source)
    return Corpus(level=REPORT, records=tuple(records), blank_skipped=blank)


def sentence_split(corpus: Corpus) -> Corpus:
    """Split every report of a report-level corpus into sentence records."""
    if corpus.level != REPORT:
        raise WrongLevel(REPORT, corpus.level)

    sentences: List[CorpusRecord] = []
    for report in corpus:
        parts = split_sentences(report.text) or [report.text.strip()]
        for part in parts:
            sentences.append(
                CorpusRecord(
                    record_id=len(sentences),
                    study_id=report.study_id,
                    level=SENTENCE,
                    text=part,
                    parent_report_id=report.record_id,
                )
            )

    return Corpus(level=SENTENCE, records=tuple(sentences), blank_skipped=corpus.blank_skipped)


def dedupe(corpus: Corpus) -> Corpus:
    """Drop records whose whitespace-normalized text was already seen.

    The first occurrence keeps its record_id; surviving text is normalized.
    """
    seen = set()
    kept: List[CorpusRecord] = []
    for record in corpus:
        key = normalize_whitespace(record.text)
        if key in seen:
            continue
        seen.add(key)
        kept.append(
            CorpusRecord(
                record_id=record.record_id,
                study_id=record.study_id,
                level=record.level,
                text=key,
                parent_report_id=record.parent_report_id,
            )
        )

    removed = corpus.count - len(kept)
    if removed:
        logger.info("Removed %d duplicate %s record(s)", removed, corpus.level)
    return Corpus(
        level=corpus.level,
        records=tuple(kept),
        blank_skipped=corpus.blank_skipped,
        duplicates_removed=corpus.duplicates_removed + removed,
    )


def save_corpus(corpus: Corpus, path: PathLike) -> None:
    """Write the corpus as JSONL (UTF-8, LF line endings)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in corpus:
            f.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def _record_from_dict(obj: Dict, line_no: int) -> CorpusRecord:
    try:
        parent = obj.get("parent_report_id")
        return CorpusRecord(
            record_id=int(obj["record_id"]),
            study_id=str(obj["study_id"]),
            level=str(obj["level"]),
            text=obj["text"],
            parent_report_id=None if parent is None else int(parent),
        )
    except KeyError as e:
        raise InvalidRecord(f"line {line_no}: missing field {e}") from e
    except (TypeError, ValueError) as e:
        raise InvalidRecord(f"line {line_no}: {e}") from e


def load_corpus(path: PathLike) -> Corpus:
    """Load and validate a corpus JSONL file written by save_corpus."""
    records: List[CorpusRecord] = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise InvalidRecord(f"line {line_no}: invalid JSON: {e}") from e
            records.append(_record_from_dict(obj, line_no))

    if not records:
        raise EmptyCorpus(f"corpus file {path} is empty")

    level = records[0].level
    if level not in LEVELS:
        raise InvalidRecord(f"unknown corpus level '{level}'")
    return Corpus(level=level, records=tuple(records))
