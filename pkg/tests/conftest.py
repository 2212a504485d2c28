"""Test configuration and fixtures for the radiology impression RAG engine tests."""

from pathlib import Path

import numpy as np
import pytest

from src.corpus_data import SENTENCE, Corpus, CorpusRecord
from src.index_data import EmbeddingSet, EmbeddingVector, build_index
from src.prompting import FewShotExample, PromptRenderer, PromptSpec
from src.vocab import VocabLists

FIXTURES_DIR = Path(__file__).parent / "fixtures"
GOLDEN_DIR = FIXTURES_DIR / "golden"

SENTENCES = [
    "Mild bibasilar atelectasis.",
    "Small right pleural effusion.",
    "No pneumothorax.",
    "Moderate cardiomegaly.",
    "Mild pulmonary edema.",
]

SENTENCE_VECTORS = [
    [1.0, 0.0, 0.0, 0.0],
    [0.9, 0.1, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
]

SHOT_IMPRESSION_JSON = (
    '{"impression": "Mild bibasilar atelectasis.", "attributes": [{"pathology": '
    '"atelectasis", "positional": "bibasilar", "severity": "mild", "size": ""}]}'
)


def read_golden(name: str) -> str:
    """Golden prompt text; the file's final newline is not part of the prompt."""
    text = (GOLDEN_DIR / name).read_text(encoding="utf-8")
    return text[:-1] if text.endswith("\n") else text


@pytest.fixture
def sentence_corpus():
    """Five sentence records from two studies."""
    records = [
        CorpusRecord(
            record_id=i,
            study_id="s1" if i < 2 else "s2",
            level=SENTENCE,
            text=text,
            parent_report_id=0 if i < 2 else 1,
        )
        for i, text in enumerate(SENTENCES)
    ]
    return Corpus(level=SENTENCE, records=tuple(records))


@pytest.fixture
def sentence_embeddings():
    """Embeddings for sentence_corpus; rows 2-4 tie against the first query."""
    return EmbeddingSet(
        record_ids=np.arange(len(SENTENCES), dtype=np.uint64),
        matrix=np.asarray(SENTENCE_VECTORS, dtype=np.float32),
    )


@pytest.fixture
def sentence_index(sentence_corpus, sentence_embeddings):
    """Normalized index over sentence_corpus."""
    return build_index(sentence_corpus, sentence_embeddings)


@pytest.fixture
def atelectasis_query():
    """Query closest to record 0, then record 1, then a three-way tie."""
    return EmbeddingVector.of([1.0, 0.0, 0.0, 0.0])


@pytest.fixture
def cardiomegaly_query():
    """Query closest to record 3."""
    return EmbeddingVector.of([0.0, 0.0, 1.0, 0.0])


@pytest.fixture
def small_vocab():
    """Minimal vocabulary used by the structured golden prompt."""
    return VocabLists(
        pathology=("atelectasis", "pleural effusion"),
        positional=("bibasilar", "right"),
        severity=("mild",),
        size=("small",),
    )


@pytest.fixture
def small_shots():
    """One few-shot example consistent with small_vocab."""
    return [
        FewShotExample(context="Mild bibasilar atelectasis.", impression_json=SHOT_IMPRESSION_JSON)
    ]


@pytest.fixture
def renderer():
    """Renderer over the packaged templates."""
    return PromptRenderer()


@pytest.fixture
def completion_spec():
    """Default completion spec (maxlen 50)."""
    return PromptSpec()


@pytest.fixture
def chat_spec():
    """Default chat spec (maxlen 50)."""
    return PromptSpec(mode="chat")
