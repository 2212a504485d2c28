from .client import OpenAICompatibleClient, call_llm
from .stubs import STUB_CLIENTS, ConcatenateClient, EchoClient, ExtractiveDedupClient, StubClient
from .types import LlmClient, LlmRequest, LlmResponse

__all__ = [
    "STUB_CLIENTS",
    "ConcatenateClient",
    "EchoClient",
    "ExtractiveDedupClient",
    "LlmClient",
    "LlmRequest",
    "LlmResponse",
    "OpenAICompatibleClient",
    "StubClient",
    "call_llm",
]
