"""Chat-completion backends: a generic HTTP client and a scripted mock."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import BackendError

__all__ = ["BackendConfig", "HttpBackend", "MockBackend"]


@dataclass(frozen=True)
class BackendConfig:
    """Where and how to reach a chat-completion endpoint.

    The auth token is read from the environment variable named by auth_env at
    request time, never stored.
    """

    base_url: str
    model: str
    auth_env: str = "GOOSEKIT_API_TOKEN"
    timeout: float = 30.0
    max_retries: int = 3
    backoff_s: float = 0.5


class HttpBackend:
    """POSTs OpenAI-style chat payloads to `{base_url}/chat/completions`."""

    def __init__(self, config: BackendConfig):
        self.config = config

    def complete(self, system: str, user: str) -> str:
        import requests

        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.config.auth_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries):
            try:
                response = requests.post(url, json=payload, headers=headers,
                                         timeout=self.config.timeout)
                if response.status_code >= 500:
                    raise BackendError(f"server error {response.status_code}")
                response.raise_for_status()
                body = response.json()
                return body["choices"][0]["message"]["content"]
            except Exception as exc:  # noqa: BLE001 - every failure is retryable here
                last_error = exc
                if attempt + 1 < self.config.max_retries:
                    time.sleep(self.config.backoff_s * (2 ** attempt))
        raise BackendError(f"backend failed after {self.config.max_retries} "
                           f"attempts: {last_error}")


class MockBackend:
    """Replays scripted responses in order; entirely offline.

    The script is either a list of response strings or a path to a JSON file
    of the form {"responses": ["...", ...]}.
    """

    def __init__(self, script):
        if isinstance(script, (str, Path)):
            data = json.loads(Path(script).read_text(encoding="utf-8"))
            responses = data["responses"]
        else:
            responses = list(script)
        self._responses = list(responses)
        self._cursor = 0
        self.calls: list[tuple[str, str]] = []

    def complete(self, system: str, user: str) -> str:
        self.calls.append((system, user))
        if self._cursor >= len(self._responses):
            raise BackendError("mock script exhausted")
        text = self._responses[self._cursor]
        self._cursor += 1
        return text
