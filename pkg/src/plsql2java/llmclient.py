"""Pluggable completion backends and fenced-code extraction.

Two backends share one interface: an HTTP chat-completions client with
retry/backoff, and a deterministic mock keyed by the sha256 digest of the
query text (found as the last fenced block of the user message, so template
tweaks never invalidate recorded fixtures). API keys live only in the
environment variable named by the config and are never stored or logged.
"""

from __future__ import annotations

import hashlib
import os
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol, Sequence

import requests

from .errors import (
    AuthError,
    EmptyResponseError,
    MockMissError,
    TransportError,
)

Message = tuple[str, str]

_RETRYABLE_STATUSES = frozenset({429}) | frozenset(range(500, 600))


@dataclass(frozen=True)
class BackendConfig:
    """Connection settings; holds the key's env-var name, never the key."""

    endpoint_url: str
    model_name: str
    api_key_env_var: str
    temperature: float = 0.0
    max_retries: int = 3
    timeout_seconds: int = 120

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")


@dataclass(frozen=True)
class CompletionResult:
    raw_text: str
    model_name: str
    latency_ms: int


class Backend(Protocol):
    def complete(self, messages: Sequence[Message]) -> CompletionResult: ...


def validate_messages(messages: Sequence[Message]) -> None:
    if not messages:
        raise ValueError("message list must be non-empty")
    if messages[0][0] != "system":
        raise ValueError("first message must have role system")
    if messages[-1][0] != "user":
        raise ValueError("last message must have role user")


def complete(backend: Backend, messages: Sequence[Message]) -> CompletionResult:
    """Dispatch validated messages to the backend."""
    validate_messages(messages)
    return backend.complete(messages)


class NetworkBackend:
    """Chat-completions POST with exponential backoff on transient failures."""

    def __init__(
        self,
        config: BackendConfig,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        self.config = config
        self._sleep = sleep
        self._rng = rng or random.Random()

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env_var)
        if not key:
            raise AuthError(
                f"environment variable {self.config.api_key_env_var} is not set"
            )
        return key

    def complete(self, messages: Sequence[Message]) -> CompletionResult:
        payload = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": [{"role": role, "content": content} for role, content in messages],
        }
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        started = time.monotonic()

        attempt = 0
        last_failure = "no attempt made"
        last_status: int | None = None
        while attempt <= self.config.max_retries:
            try:
                response = requests.post(
                    self.config.endpoint_url,
                    json=payload,
                    headers=headers,
                    timeout=self.config.timeout_seconds,
                )
            except (requests.Timeout, requests.ConnectionError) as exc:
                last_failure = f"transport failure: {exc}"
                last_status = None
            else:
                status = response.status_code
                if status in (401, 403):
                    raise AuthError(f"authentication rejected (HTTP {status})")
                if status == 200:
                    text = _parse_completion_body(response)
                    latency_ms = int((time.monotonic() - started) * 1000)
                    return CompletionResult(text, self.config.model_name, latency_ms)
                if status not in _RETRYABLE_STATUSES:
                    raise TransportError(
                        f"backend returned HTTP {status}", status=status
                    )
                last_failure = f"HTTP {status}"
                last_status = status

            if attempt == self.config.max_retries:
                break
            delay = (2.0 ** attempt) + self._rng.uniform(0.0, 1.0)
            self._sleep(delay)
            attempt += 1

        raise TransportError(
            f"retries exhausted after {self.config.max_retries + 1} attempts; "
            f"last failure: {last_failure}",
            status=last_status,
        )


def _parse_completion_body(response: requests.Response) -> str:
    try:
        body = response.json()
        return body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise TransportError(f"malformed completion response: {exc}") from exc


def query_digest(text: str) -> str:
    """Lowercase sha256 hex of a query's text; the mock-table key."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class MockBackend:
    """Deterministic table-driven backend for tests and offline runs.

    The lookup key is the digest of the last fenced block in the final user
    message (the query travels there verbatim); messages without any fenced
    block fall back to the digest of the whole user content, which is what
    the strategy-advice flow exercises.
    """

    model_name = "mock"

    def __init__(self, table: dict[str, str]):
        self.table = dict(table)

    def complete(self, messages: Sequence[Message]) -> CompletionResult:
        user_content = messages[-1][1]
        blocks = find_fenced_blocks(user_content)
        key_text = blocks[-1][1] if blocks else user_content
        digest = query_digest(key_text)
        if digest not in self.table:
            raise MockMissError(digest)
        return CompletionResult(self.table[digest], self.model_name, 0)


def load_mock_table(path: Path | str) -> dict[str, str]:
    """Read "digest<TAB>response-path" lines; paths resolve beside the table."""
    path = Path(path)
    table: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(
                f"{path.name}:{lineno}: expected 'digest<TAB>path', got {line!r}"
            )
        digest, rel = parts
        table[digest.strip().lower()] = (path.parent / rel).read_text(encoding="utf-8")
    return table


def find_fenced_blocks(text: str) -> list[tuple[str, str]]:
    """All (info_string, content) fenced blocks, flush-left fences only.

    An unterminated trailing fence is treated as running to end of input.
    """
    blocks: list[tuple[str, str]] = []
    info: str | None = None
    buffer: list[str] = []
    for line in text.split("\n"):
        if info is None:
            if line.startswith("```") and line.strip() != "```":
                info = line[3:].strip()
                buffer = []
            elif line.strip() == "```":
                info = ""
                buffer = []
        else:
            if line.strip() == "```":
                blocks.append((info, "\n".join(buffer)))
                info = None
            else:
                buffer.append(line)
    if info is not None:
        blocks.append((info, "\n".join(buffer)))
    return blocks


def extract_code_block(raw: str, language_tag: str) -> str:
    """Pull generated code out of a completion.

    Preference order: first fenced block whose info string's first word
    matches `language_tag` case-insensitively, then the first fenced block of
    any tag, then the whole text trimmed. Raises EmptyResponseError when the
    response has no visible content.
    """
    if not raw.strip():
        raise EmptyResponseError("backend returned an empty response")
    blocks = find_fenced_blocks(raw)
    wanted = language_tag.lower()
    for info, content in blocks:
        first_word = info.split()[0].lower() if info.split() else ""
        if first_word == wanted:
            return content
    if blocks:
        return blocks[0][1]
    return raw.strip()
