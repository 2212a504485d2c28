"""
OpenAI-compatible HTTP client for impression generation.
Completion prompts go to /completions, chat prompts to /chat/completions.
"""

import logging
import os
from typing import Any, Dict, Optional

import backoff
import httpx

from ..errors import LlmUnavailable, RequestRejected
from ..prompting.renderer import COMPLETION
from .types import LlmClient, LlmRequest, LlmResponse

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openai.com/v1"
DEFAULT_API_KEY_ENV = "OPENAI_API_KEY"

COMPLETIONS_PATH = "completions"
CHAT_COMPLETIONS_PATH = "chat/completions"


class RetryableLlmError(Exception):
    """429, 5xx or transport failure; retried with backoff."""


class OpenAICompatibleClient:
    """HTTP client for OpenAI-compatible completion endpoints."""

    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        timeout: float = 60.0,
        max_attempts: int = 3,
        backoff_base: float = 1.0,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        """
        Initialize the client.

        Args:
            base_url: Endpoint base URL, e.g. https://api.openai.com/v1
            api_key_env: Environment variable holding the API key
            timeout: Per-request timeout in seconds
            max_attempts: Total attempts for retryable failures
            backoff_base: First backoff delay in seconds, doubled per retry
            transport: Optional httpx transport (scripted in tests)
        """
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self._http = httpx.Client(timeout=timeout, transport=transport)
        self._post_with_retry = backoff.on_exception(
            backoff.expo,
            RetryableLlmError,
            max_tries=max_attempts,
            factor=backoff_base,
            jitter=None,
            on_backoff=self._log_retry,
        )(self._post)

    @staticmethod
    def _log_retry(details: Dict[str, Any]) -> None:
        logger.warning(
            "LLM request failed (attempt %d), retrying in %.1fs: %s",
            details["tries"],
            details["wait"],
            details.get("exception"),
        )

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env, "").strip()
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        return headers

    def _post(self, path: str, body: Dict[str, Any]) -> Dict[str, Any]:
        url = f"{self.base_url}/{path}"
        try:
            response = self._http.post(url, json=body, headers=self._headers())
        except httpx.TransportError as e:
            raise RetryableLlmError(f"transport error: {e}") from e

        status = response.status_code
        if status == 429 or status >= 500:
            raise RetryableLlmError(f"HTTP {status}: {response.text[:200]}")
        if status >= 400:
            raise RequestRejected(status, response.text[:1200])

        try:
            return response.json()
        except ValueError as e:
            raise LlmUnavailable(f"invalid JSON response: {e}") from e

    @staticmethod
    def _parse(mode: str, data: Dict[str, Any]) -> LlmResponse:
        try:
            choice = data["choices"][0]
            if mode == COMPLETION:
                text = choice["text"]
            else:
                text = choice["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise LlmUnavailable(f"unexpected response shape: {e}") from e

        usage = data.get("usage") or {}
        return LlmResponse(
            text=(text or "").strip(),
            prompt_tokens=usage.get("prompt_tokens"),
            completion_tokens=usage.get("completion_tokens"),
            finish_reason=choice.get("finish_reason"),
        )

    def complete(self, request: LlmRequest) -> LlmResponse:
        path = COMPLETIONS_PATH if request.mode == COMPLETION else CHAT_COMPLETIONS_PATH
        try:
            data = self._post_with_retry(path, request.to_payload())
        except RetryableLlmError as e:
            raise LlmUnavailable(
                f"LLM endpoint unavailable after {self.max_attempts} attempts: {e}"
            ) from e
        return self._parse(request.mode, data)

    def close(self) -> None:
        self._http.close()


def call_llm(client: LlmClient, request: LlmRequest) -> LlmResponse:
    """
    Issue one LLM call and enforce a non-empty answer.

    Args:
        client: HTTP or stub client
        request: Request to send

    Returns:
        LlmResponse with non-empty text
    """
    if request.temperature < 0:
        raise ValueError(f"temperature {request.temperature} cannot be negative")
    if request.max_output_tokens < 1:
        raise ValueError("max_output_tokens must be positive")

    response = client.complete(request)
    if not response.text or not response.text.strip():
        raise LlmUnavailable("LLM returned an empty response")
    logger.debug(
        "LLM call (%s, %s) finished: %s", request.mode, request.model_name, response.finish_reason
    )
    return response
