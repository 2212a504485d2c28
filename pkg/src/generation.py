"""
Generation orchestration: retrieve top-K context, render the prompt, call
the LLM and, when the context does not fit the token budget, fold it in one
record at a time with the refine chain.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from .corpus_data import LEVELS, Corpus
from .errors import (
    ContextOverflow,
    EmptyContext,
    GenerationError,
    InvalidConfig,
    LlmError,
    LlmUnavailable,
    PromptError,
    StructuredOutputError,
)
from .index_data import EmbeddingVector, VectorIndex, top_k
from .llm import LlmClient, LlmRequest, call_llm
from .prompting import (
    COMPLETION,
    DEFAULT_MAXLEN,
    STRUCTURED_FEW_SHOT,
    ZERO_SHOT,
    FewShotExample,
    PromptRenderer,
    PromptSpec,
    RenderedPrompt,
    load_shots,
)
from .prompting.renderer import MODES
from .structured import StructuredImpression, parse_structured
from .vocab import VocabLists, load_vocab

logger = logging.getLogger(__name__)

SINGLE = "single"
REFINE_CHAIN = "refine"

TOKEN_ESTIMATORS = ("chars", "whitespace")
GENERATION_TEMPLATES = (ZERO_SHOT, STRUCTURED_FEW_SHOT)


@dataclass(frozen=True)
class GenerationConfig:
    k: int = 3
    corpus_level: str = "sentence"
    mode: str = COMPLETION
    model_name: str = "gpt-4"
    temperature: float = 0.0
    token_budget: int = 4096
    refine_enabled: bool = False
    maxlen: int = DEFAULT_MAXLEN
    max_output_tokens: int = 256
    token_estimator: str = "chars"
    template: str = ZERO_SHOT
    instructions: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidConfig(f"k must be a positive integer, got {self.k!r}")
        if self.corpus_level not in LEVELS:
            raise InvalidConfig(f"corpus_level must be one of {LEVELS}, got '{self.corpus_level}'")
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got '{self.mode}'")
        if not self.model_name:
            raise InvalidConfig("model_name is required")
        if self.temperature < 0:
            raise InvalidConfig(f"temperature cannot be negative, got {self.temperature}")
        if not isinstance(self.token_budget, int) or self.token_budget < 1:
            raise InvalidConfig(
                f"token_budget must be a positive integer, got {self.token_budget!r}"
            )
        if not isinstance(self.maxlen, int) or self.maxlen < 1:
            raise InvalidConfig(f"maxlen must be a positive integer, got {self.maxlen!r}")
        if not isinstance(self.max_output_tokens, int) or self.max_output_tokens < 1:
            raise InvalidConfig("max_output_tokens must be a positive integer")
        if self.token_estimator not in TOKEN_ESTIMATORS:
            raise InvalidConfig(f"token_estimator must be one of {TOKEN_ESTIMATORS}")
        if self.template not in GENERATION_TEMPLATES:
            raise InvalidConfig(f"template must be one of {GENERATION_TEMPLATES}")
        if self.instructions is not None:
            object.__setattr__(self, "instructions", tuple(self.instructions))

    def prompt_spec(self, template_id: Optional[str] = None) -> PromptSpec:
        return PromptSpec(
            mode=self.mode,
            instructions=self.instructions,
            maxlen=self.maxlen,
            template_id=template_id or self.template,
        )

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if data["instructions"] is not None:
            data["instructions"] = list(data["instructions"])
        return data


@dataclass
class Impression:
    text: str
    provenance: List[int]
    llm_call_count: int
    strategy: str = SINGLE
    scores: List[float] = field(default_factory=list)
    context: List[str] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    structured: Optional[StructuredImpression] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "impression": self.text,
            "provenance": list(self.provenance),
            "scores": [round(float(s), 6) for s in self.scores],
            "context": list(self.context),
            "llm_call_count": self.llm_call_count,
            "strategy": self.strategy,
        }
        if self.structured is not None:
            data["structured"] = self.structured.to_dict()
        return data


def estimate_tokens(text: str, mode: str = "chars") -> int:
    """
    Rough token count for budget checks.

    Args:
        text: Prompt text
        mode: "chars" for ceil(len/4), "whitespace" for the number of
            whitespace-separated tokens

    Returns:
        Estimated token count
    """
    if mode == "chars":
        return math.ceil(len(text) / 4)
    if mode == "whitespace":
        return len(text.split())
    raise ValueError(f"unknown token estimator '{mode}'")


def _request(prompt: RenderedPrompt, config: GenerationConfig) -> LlmRequest:
    return LlmRequest(
        prompt=prompt,
        model_name=config.model_name,
        temperature=config.temperature,
        max_output_tokens=config.max_output_tokens,
    )


def _check_frame_budget(
    renderer: PromptRenderer,
    config: GenerationConfig,
    vocab: Optional[VocabLists],
    shots: Sequence[FewShotExample],
) -> None:
    frame_tokens = estimate_tokens(
        renderer.render_frame(config.prompt_spec(), vocab, shots), config.token_estimator
    )
    if config.token_budget < frame_tokens:
        raise InvalidConfig(
            f"token_budget {config.token_budget} is below the {frame_tokens} tokens "
            "the prompt needs with no context"
        )


def _refine_chain(
    sentences: Sequence[str],
    config: GenerationConfig,
    client: LlmClient,
    renderer: PromptRenderer,
) -> str:
    spec = config.prompt_spec(ZERO_SHOT)
    impression = None
    for step, sentence in enumerate(sentences):
        if impression is None:
            prompt = renderer.render_zero_shot([sentence], spec)
        else:
            prompt = renderer.render_refine(impression, sentence, spec)
        try:
            impression = call_llm(client, _request(prompt, config)).text
        except LlmUnavailable as e:
            raise LlmUnavailable(str(e), chain_index=step) from e
        logger.debug("refine step %d/%d done", step + 1, len(sentences))
    return impression


def refine_generate(
    sentences: Sequence[str],
    config: GenerationConfig,
    client: LlmClient,
    renderer: Optional[PromptRenderer] = None,
    record_ids: Optional[Sequence[int]] = None,
) -> Impression:
    """
    Build an impression by folding context records in one at a time.

    The first record gets the zero-shot prompt; every later record gets one
    refine call carrying the previous impression forward.

    Args:
        sentences: Context records in retrieval order
        config: Generation settings
        client: LLM client
        renderer: Prompt renderer (default templates when None)
        record_ids: Ids of the records, kept as provenance

    Returns:
        Impression with llm_call_count == len(sentences)
    """
    if not sentences:
        raise EmptyContext("refine_generate needs at least one context record")
    renderer = renderer or PromptRenderer()
    text = _refine_chain(sentences, config, client, renderer)
    return Impression(
        text=text,
        provenance=list(record_ids or []),
        llm_call_count=len(sentences),
        strategy=REFINE_CHAIN,
        context=list(sentences),
        config=config.to_dict(),
    )


def generate(
    query: EmbeddingVector,
    index: VectorIndex,
    corpus: Corpus,
    config: GenerationConfig,
    client: LlmClient,
    renderer: Optional[PromptRenderer] = None,
    vocab: Optional[VocabLists] = None,
    shots: Optional[Sequence[FewShotExample]] = None,
) -> Impression:
    """
    Generate one impression for a query embedding.

    Args:
        query: Query embedding
        index: Index built over corpus
        corpus: Context records
        config: Generation settings
        client: LLM client (HTTP or stub)
        renderer: Prompt renderer (default templates when None)
        vocab: Vocabulary for structured prompts (packaged lists when None)
        shots: Few-shot examples for structured prompts (packaged when None)

    Returns:
        Impression with rank-ordered provenance
    """
    renderer = renderer or PromptRenderer()
    structured = config.template == STRUCTURED_FEW_SHOT
    if structured:
        vocab = vocab or load_vocab()
        shots = shots if shots is not None else load_shots()
    shots = shots or ()

    if corpus.level != config.corpus_level:
        logger.warning(
            "corpus level '%s' differs from configured level '%s'",
            corpus.level,
            config.corpus_level,
        )
    _check_frame_budget(renderer, config, vocab, shots)

    results = top_k(index, query, config.k)
    ids = [r.record_id for r in results]
    scores = [r.score for r in results]
    context = corpus.texts(ids)

    spec = config.prompt_spec()
    if structured:
        prompt = renderer.render_structured(context, vocab, shots, spec)
    else:
        prompt = renderer.render_zero_shot(context, spec)

    estimated = estimate_tokens(prompt.as_text(), config.token_estimator)
    if estimated > config.token_budget:
        if not config.refine_enabled or structured:
            raise ContextOverflow(estimated, config.token_budget)
        logger.info(
            "prompt needs ~%d tokens (budget %d), refining over %d records",
            estimated,
            config.token_budget,
            len(context),
        )
        impression = refine_generate(context, config, client, renderer, record_ids=ids)
        impression.scores = scores
        return impression

    response = call_llm(client, _request(prompt, config))
    impression = Impression(
        text=response.text,
        provenance=ids,
        llm_call_count=1,
        strategy=SINGLE,
        scores=scores,
        context=context,
        config=config.to_dict(),
    )
    if structured:
        impression.structured = parse_structured(response.text, vocab)
        impression.text = impression.structured.impression
    return impression


@dataclass
class BatchOutcome:
    query_id: Union[int, str]
    impression: Optional[Impression] = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.impression is not None


# per-query failures that leave the rest of a batch usable
CAPTURED_ERRORS = (LlmError, StructuredOutputError, GenerationError, PromptError)


def generate_batch(
    queries: Sequence[Tuple[Union[int, str], EmbeddingVector]],
    index: VectorIndex,
    corpus: Corpus,
    config: GenerationConfig,
    client: LlmClient,
    max_in_flight: int = 4,
    renderer: Optional[PromptRenderer] = None,
    vocab: Optional[VocabLists] = None,
    shots: Optional[Sequence[FewShotExample]] = None,
    on_done: Optional[Callable[[BatchOutcome], None]] = None,
) -> List[BatchOutcome]:
    """
    Generate impressions for many queries concurrently.

    At most max_in_flight queries run at once, so at most that many LLM
    requests are outstanding. Results come back in query order.
    """
    if max_in_flight < 1:
        raise InvalidConfig("max_in_flight must be at least 1")
    renderer = renderer or PromptRenderer()
    if config.template == STRUCTURED_FEW_SHOT:
        vocab = vocab or load_vocab()
        shots = shots if shots is not None else load_shots()

    def run(query_id: Union[int, str], query: EmbeddingVector) -> BatchOutcome:
        try:
            impression = generate(query, index, corpus, config, client, renderer, vocab, shots)
            outcome = BatchOutcome(query_id, impression=impression)
        except InvalidConfig:
            raise
        except CAPTURED_ERRORS as e:
            logger.warning("query %s failed: %s", query_id, e)
            outcome = BatchOutcome(query_id, error=str(e), error_type=type(e).__name__)
        if on_done is not None:
            on_done(outcome)
        return outcome

    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        futures = [pool.submit(run, qid, q) for qid, q in queries]
        return [f.result() for f in futures]
