from .ingest import dedupe, ingest_reports, load_corpus, save_corpus, sentence_split
from .records import LEVELS, REPORT, SENTENCE, Corpus, CorpusRecord, normalize_whitespace
from .splitter import split_sentences

__all__ = [
    "LEVELS",
    "REPORT",
    "SENTENCE",
    "Corpus",
    "CorpusRecord",
    "dedupe",
    "ingest_reports",
    "load_corpus",
    "normalize_whitespace",
    "save_corpus",
    "sentence_split",
    "split_sentences",
]
