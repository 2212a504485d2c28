"""
Embedder and entity extractor interfaces plus deterministic implementations.

Real model outputs (contextual token embeddings, report embeddings, clinical
entities) are produced elsewhere and plugged in through the sidecar classes;
the hashed embedders give hermetic, reproducible scores.
"""

import hashlib
import json
import re
from collections import Counter
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Protocol, Set, Union

import numpy as np

from ..errors import ConfigError, EvaluationError
from ..index_data import EmbeddingVector, read_embeddings
from ..vocab import VOCAB_FIELDS, VocabLists

TOKEN_PATTERN = re.compile(r"[a-z0-9]+")

PathLike = Union[str, Path]


def tokenize(text: str) -> List[str]:
    return TOKEN_PATTERN.findall(text.lower())


def stable_hash(token: str) -> int:
    return int.from_bytes(hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "little")


class TokenEmbedder(Protocol):
    supports_concurrency: bool

    def embed_tokens(self, text: str) -> List[EmbeddingVector]: ...


class ReportEmbedder(Protocol):
    supports_concurrency: bool

    def embed_report(self, text: str) -> EmbeddingVector: ...


class EntityExtractor(Protocol):
    supports_concurrency: bool

    def extract(self, text: str) -> Set[str]: ...


class HashedBagOfWordsEmbedder:
    """Report embedding as token counts over hashed buckets."""

    supports_concurrency = True

    def __init__(self, dim: int = 1024):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim

    def bucket(self, token: str) -> int:
        return stable_hash(token) % self.dim

    def embed_report(self, text: str) -> EmbeddingVector:
        counts = np.zeros(self.dim, dtype=np.float32)
        for token, n in Counter(tokenize(text)).items():
            counts[self.bucket(token)] += n
        return EmbeddingVector(counts)


class HashedTokenEmbedder:
    """One gaussian vector per token, seeded by the token's hash."""

    supports_concurrency = True

    def __init__(self, dim: int = 64, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def token_vector(self, token: str) -> EmbeddingVector:
        rng = np.random.default_rng([stable_hash(token), self.seed])
        return EmbeddingVector(rng.standard_normal(self.dim).astype(np.float32))

    def embed_tokens(self, text: str) -> List[EmbeddingVector]:
        return [self.token_vector(token) for token in tokenize(text)]


class VocabEntityExtractor:
    """Entities are the vocabulary terms that occur in the text as whole words."""

    supports_concurrency = True

    def __init__(self, vocab: VocabLists, lists: Optional[List[str]] = None):
        names = lists or ["pathology"]
        unknown = [n for n in names if n not in VOCAB_FIELDS]
        if unknown:
            raise ValueError(f"unknown vocabulary lists: {unknown}")
        terms = sorted({t for name in names for t in getattr(vocab, name)}, key=len, reverse=True)
        self._patterns = [(t, re.compile(r"\b" + re.escape(t) + r"\b")) for t in terms]

    def extract(self, text: str) -> Set[str]:
        lowered = " ".join(text.lower().split())
        return {term for term, pattern in self._patterns if pattern.search(lowered)}


# sidecar mode: outputs computed out of process, looked up by text


def _read_jsonl(path: PathLike, field: str) -> Dict[str, object]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"sidecar file not found: {path}")
    values = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                values[str(obj["record_id"])] = obj[field]
            except (json.JSONDecodeError, KeyError) as e:
                raise ConfigError(f"{path}:{line_no}: expected {{record_id, {field}}}: {e}") from e
    return values


class _SidecarLookup:
    supports_concurrency = True
    kind = "sidecar"

    def __init__(self):
        self._by_text: Dict[str, object] = {}

    def _register(self, texts: Mapping[str, str], values: Mapping[str, object], source: PathLike):
        missing = sorted(set(map(str, texts)) - set(values))
        if missing:
            raise ConfigError(f"{source} has no {self.kind} for record ids {missing[:10]}")
        for rid, text in texts.items():
            self._by_text[text] = values[str(rid)]

    def _lookup(self, text: str):
        try:
            return self._by_text[text]
        except KeyError:
            raise EvaluationError(f"no {self.kind} registered for text {text[:60]!r}") from None


class SidecarReportEmbedder(_SidecarLookup):
    kind = "report embedding"

    def add(self, texts: Mapping[str, str], path: PathLike) -> "SidecarReportEmbedder":
        """Attach embeddings from an embedding file to the texts with the same record ids."""
        if not Path(path).exists():
            raise ConfigError(f"sidecar file not found: {path}")
        vectors = {str(rid): v for rid, v in read_embeddings(path).as_dict().items()}
        self._register(texts, vectors, path)
        return self

    def embed_report(self, text: str) -> EmbeddingVector:
        return self._lookup(text)


class SidecarTokenEmbedder(_SidecarLookup):
    kind = "token embeddings"

    def add(self, texts: Mapping[str, str], path: PathLike) -> "SidecarTokenEmbedder":
        """Attach per-token vectors from JSONL {record_id, tokens: [[...], ...]}."""
        raw = _read_jsonl(path, "tokens")
        vectors = {rid: [EmbeddingVector.of(row) for row in rows] for rid, rows in raw.items()}
        self._register(texts, vectors, path)
        return self

    def embed_tokens(self, text: str) -> List[EmbeddingVector]:
        return list(self._lookup(text))


class SidecarEntityExtractor(_SidecarLookup):
    kind = "entities"

    def add(self, texts: Mapping[str, str], path: PathLike) -> "SidecarEntityExtractor":
        """Attach entity sets from JSONL {record_id, entities: [...]}."""
        raw = _read_jsonl(path, "entities")
        entities = {rid: {str(e).strip().lower() for e in values} for rid, values in raw.items()}
        self._register(texts, entities, path)
        return self

    def extract(self, text: str) -> Set[str]:
        return set(self._lookup(text))
