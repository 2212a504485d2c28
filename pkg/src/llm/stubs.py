"""
Deterministic stand-ins for an LLM endpoint.

Each stub answers from the rendered prompt alone, so pipeline runs are
reproducible and need no network. Requests are recorded for inspection.
"""

import threading
from typing import Dict, List, Optional

from ..corpus_data.splitter import split_sentences
from ..prompting.renderer import PromptRenderer
from .types import LlmRequest, LlmResponse


class StubClient:
    """Base stub: records requests and delegates the answer to _answer()."""

    name = "stub"

    def __init__(self, renderer: Optional[PromptRenderer] = None):
        self.renderer = renderer or PromptRenderer()
        self.requests: List[LlmRequest] = []
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        with self._lock:
            return len(self.requests)

    def reset(self) -> None:
        with self._lock:
            self.requests.clear()

    def complete(self, request: LlmRequest) -> LlmResponse:
        with self._lock:
            self.requests.append(request)
        sections = self.renderer.extract_sections(request.prompt)
        text = self._answer(sections)
        return LlmResponse(
            text=text,
            prompt_tokens=len(request.prompt.as_text().split()),
            completion_tokens=len(text.split()),
            finish_reason="stop",
        )

    def _answer(self, sections: Dict[str, str]) -> str:
        raise NotImplementedError


class EchoClient(StubClient):
    """Returns the prompt's context verbatim."""

    name = "echo"

    def _answer(self, sections: Dict[str, str]) -> str:
        return sections["context"]


class ConcatenateClient(StubClient):
    """Returns the context; on refine prompts, the previous impression + " " + context."""

    name = "concatenate"

    def _answer(self, sections: Dict[str, str]) -> str:
        previous = sections.get("existing_impression")
        if previous is None:
            return sections["context"]
        return f"{previous} {sections['context']}"


class ExtractiveDedupClient(StubClient):
    """Returns the unique context sentences, in order, joined with spaces."""

    name = "extractive"

    def _answer(self, sections: Dict[str, str]) -> str:
        parts = [sections.get("existing_impression", ""), sections["context"]]
        seen = set()
        unique = []
        for part in parts:
            for line in part.splitlines():
                for sentence in split_sentences(line):
                    if sentence not in seen:
                        seen.add(sentence)
                        unique.append(sentence)
        return " ".join(unique)


STUB_CLIENTS = {
    EchoClient.name: EchoClient,
    ConcatenateClient.name: ConcatenateClient,
    ExtractiveDedupClient.name: ExtractiveDedupClient,
}
