"""
Corpus record types for report-level and sentence-level retrieval corpora.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import InvalidRecord, WrongLevel

REPORT = "report"
SENTENCE = "sentence"
LEVELS = (REPORT, SENTENCE)

_WHITESPACE = re.compile(r"\s+")


def normalize_whitespace(text: str) -> str:
    """Collapse runs of whitespace to a single space and trim."""
    return _WHITESPACE.sub(" ", text).strip()


@dataclass(frozen=True)
class CorpusRecord:
    record_id: int
    study_id: str
    level: str
    text: str
    parent_report_id: Optional[int] = None

    def __post_init__(self):
        if self.level not in LEVELS:
            raise InvalidRecord(f"record {self.record_id}: unknown level '{self.level}'")
        if not normalize_whitespace(self.text):
            raise InvalidRecord(f"record {self.record_id}: text is blank")
        if (self.level == SENTENCE) != (self.parent_report_id is not None):
            raise InvalidRecord(
                f"record {self.record_id}: parent_report_id must be set exactly "
                "for sentence-level records"
            )

    def to_dict(self) -> Dict:
        return {
            "record_id": self.record_id,
            "study_id": self.study_id,
            "level": self.level,
            "text": self.text,
            "parent_report_id": self.parent_report_id,
        }


@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of records sharing one level."""

    level: str
    records: Tuple[CorpusRecord, ...]
    blank_skipped: int = 0
    duplicates_removed: int = 0
    _by_id: Dict[int, CorpusRecord] = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.level not in LEVELS:
            raise WrongLevel(" or ".join(LEVELS), self.level)
        records = tuple(self.records)
        object.__setattr__(self, "records", records)

        by_id = {}
        for record in records:
            if record.level != self.level:
                raise WrongLevel(self.level, record.level)
            if record.record_id in by_id:
                raise InvalidRecord(f"duplicate record_id {record.record_id}")
            by_id[record.record_id] = record
        object.__setattr__(self, "_by_id", by_id)

    @property
    def count(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def record_ids(self) -> List[int]:
        return [r.record_id for r in self.records]

    def get(self, record_id: int) -> CorpusRecord:
        try:
            return self._by_id[record_id]
        except KeyError:
            raise InvalidRecord(f"record_id {record_id} not in corpus") from None

    def texts(self, record_ids: Iterable[int]) -> List[str]:
        return [self.get(i).text for i in record_ids]
