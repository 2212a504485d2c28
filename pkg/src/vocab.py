"""
Attribute vocabularies for structured impressions (pathology, positional,
severity and size terms).
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Tuple, Union

from .errors import InvalidVocab, MissingVocab

VOCAB_FIELDS = ("pathology", "positional", "severity", "size")

DEFAULT_VOCAB_PATH = Path(__file__).parent / "prompting" / "assets" / "vocab.json"


def _clean_terms(name: str, terms: Iterable[str]) -> Tuple[str, ...]:
    cleaned = tuple(str(t).strip().lower() for t in terms)
    if not cleaned or any(not t for t in cleaned):
        raise MissingVocab(name)
    if len(set(cleaned)) != len(cleaned):
        dupes = sorted({t for t in cleaned if cleaned.count(t) > 1})
        raise InvalidVocab(f"vocabulary list '{name}' has duplicate terms: {dupes}")
    return cleaned


@dataclass(frozen=True)
class VocabLists:
    pathology: Tuple[str, ...]
    positional: Tuple[str, ...]
    severity: Tuple[str, ...]
    size: Tuple[str, ...]

    def __post_init__(self):
        for name in VOCAB_FIELDS:
            object.__setattr__(self, name, _clean_terms(name, getattr(self, name)))

    @classmethod
    def from_dict(cls, data: Dict) -> "VocabLists":
        return cls(**{name: data.get(name) or () for name in VOCAB_FIELDS})

    def to_dict(self) -> Dict:
        return {name: list(getattr(self, name)) for name in VOCAB_FIELDS}

    def contains(self, list_name: str, term: str) -> bool:
        """Case-insensitive membership check."""
        return term.strip().lower() in getattr(self, list_name)


def load_vocab(path: Union[str, Path, None] = None) -> VocabLists:
    """
    Load vocabulary lists from a JSON object of arrays.

    Args:
        path: Path to the vocab file; the packaged default when None

    Returns:
        Validated VocabLists
    """
    with open(path or DEFAULT_VOCAB_PATH, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise InvalidVocab(f"{path}: expected a JSON object of term arrays")
    return VocabLists.from_dict(data)
