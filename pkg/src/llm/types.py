"""
Transport envelope for LLM calls.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Protocol

from ..prompting.renderer import COMPLETION, RenderedPrompt


@dataclass(frozen=True)
class LlmRequest:
    prompt: RenderedPrompt
    model_name: str
    temperature: float = 0.0
    max_output_tokens: int = 256

    @property
    def mode(self) -> str:
        return self.prompt.mode

    def to_payload(self) -> Dict[str, Any]:
        """OpenAI-compatible request body for this request's mode."""
        body: Dict[str, Any] = {"model": self.model_name}
        if self.mode == COMPLETION:
            body["prompt"] = self.prompt.text
        else:
            body["messages"] = self.prompt.to_messages()
        body["temperature"] = self.temperature
        body["max_tokens"] = self.max_output_tokens
        return body


@dataclass(frozen=True)
class LlmResponse:
    text: str
    prompt_tokens: Optional[int] = None
    completion_tokens: Optional[int] = None
    finish_reason: Optional[str] = None


class LlmClient(Protocol):
    """Anything that can answer an LlmRequest."""

    def complete(self, request: LlmRequest) -> LlmResponse: ...
