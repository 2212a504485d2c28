"""
Exception hierarchy for the radiology impression RAG engine.
Every error raised by the package derives from RagError so the CLI can map
failures to exit codes in one place.
"""

from typing import Iterable, List, Optional


class RagError(Exception):
    """Base class for all package errors."""


# corpus


class CorpusError(RagError):
    pass


class EmptyCorpus(CorpusError):
    pass


class WrongLevel(CorpusError):
    def __init__(self, expected: str, actual: str):
        super().__init__(f"expected a {expected}-level corpus, got {actual}")
        self.expected = expected
        self.actual = actual


class InvalidRecord(CorpusError):
    pass


# index


class RetrievalError(RagError):
    pass


class DegenerateVector(RetrievalError):
    pass


class InvalidVector(RetrievalError):
    pass


class DimMismatch(RetrievalError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"dimension mismatch: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class CorpusEmbeddingMismatch(RetrievalError):
    def __init__(self, message: str, missing: Iterable[int] = (), extra: Iterable[int] = ()):
        super().__init__(message)
        self.missing = sorted(missing)
        self.extra = sorted(extra)


class InvalidK(RetrievalError):
    pass


class EmbeddingFormatError(RetrievalError):
    pass


# prompting


class PromptError(RagError):
    pass


class EmptyContext(PromptError):
    pass


class MissingShots(PromptError):
    pass


class MissingVocab(PromptError):
    def __init__(self, list_name: str):
        super().__init__(f"vocabulary list '{list_name}' is empty or missing")
        self.list_name = list_name


class TemplateError(PromptError):
    pass


class InvalidVocab(PromptError):
    pass


# generation


class GenerationError(RagError):
    pass


class ContextOverflow(GenerationError):
    def __init__(self, estimated: int, budget: int):
        super().__init__(
            f"rendered prompt needs ~{estimated} tokens, budget is {budget} "
            "and the refine chain is not available"
        )
        self.estimated = estimated
        self.budget = budget


class InvalidConfig(GenerationError):
    pass


class LlmError(RagError):
    pass


class LlmUnavailable(LlmError):
    def __init__(self, message: str, chain_index: Optional[int] = None):
        if chain_index is not None:
            message = f"{message} (refine chain step {chain_index})"
        super().__init__(message)
        self.chain_index = chain_index


class RequestRejected(LlmError):
    def __init__(self, status_code: int, body: str):
        super().__init__(f"LLM endpoint rejected the request: HTTP {status_code}: {body}")
        self.status_code = status_code
        self.body = body


class StructuredOutputError(RagError):
    pass


class NotJson(StructuredOutputError):
    pass


class SchemaViolation(StructuredOutputError):
    def __init__(self, field: str, message: str = ""):
        super().__init__(f"schema violation at '{field}'" + (f": {message}" if message else ""))
        self.field = field


class VocabViolation(StructuredOutputError):
    def __init__(self, term: str, list_name: str):
        super().__init__(f"'{term}' is not in the {list_name} vocabulary")
        self.term = term
        self.list_name = list_name


# eval


class EvaluationError(RagError):
    pass


class EmptyText(EvaluationError):
    pass


class EmptyEvaluation(EvaluationError):
    pass


class InvalidThreshold(EvaluationError):
    pass


class AlignmentError(EvaluationError):
    def __init__(self, missing: Iterable[str] = (), extra: Iterable[str] = ()):
        self.missing: List[str] = sorted(str(i) for i in missing)
        self.extra: List[str] = sorted(str(i) for i in extra)
        super().__init__(
            f"prediction/reference ids are not aligned: "
            f"missing={self.missing} extra={self.extra}"
        )


# configuration


class ConfigError(RagError):
    pass
