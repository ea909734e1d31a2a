from __future__ import annotations

import hashlib
import json
import logging
import os
import socket
import urllib.error
import urllib.request
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Protocol

from plan_x.errors import BackendError
from plan_x.io.json_io import dumps_json, read_json
from plan_x.prompt.builder import request_of


logger = logging.getLogger(__name__)

ENDPOINT_ENV = "PLANX_LLM_ENDPOINT"


class CompletionBackend(Protocol):
    identifier: str

    def complete(self, prompt: str) -> str:
        ...


def request_fingerprint(request: str) -> str:
    return hashlib.sha256(request.strip().encode("utf-8")).hexdigest()


class ScriptedBackend:
    """Replies from a fixture map keyed by literal request or its fingerprint."""

    identifier = "scripted"

    def __init__(self, replies: Mapping[str, Any]) -> None:
        self._replies: Dict[str, str] = {}
        for key, reply in replies.items():
            text = reply if isinstance(reply, str) else dumps_json(reply)
            self._replies[key.strip()] = text

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        script_path = Path(path)
        try:
            raw = read_json(script_path)
        except (OSError, ValueError) as exc:
            raise BackendError(f"cannot read scripted replies {script_path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise BackendError(f"{script_path}: scripted replies must be a JSON object")
        return cls(raw)

    def requests(self) -> list[str]:
        return list(self._replies)

    def complete(self, prompt: str) -> str:
        request = request_of(prompt)
        reply = self._replies.get(request)
        if reply is None:
            reply = self._replies.get(request_fingerprint(request))
        if reply is None:
            raise BackendError(f"no scripted reply for request {request_fingerprint(request)[:12]}")
        return reply


def _post_json(url: str, payload: Dict[str, Any], timeout: float) -> Dict[str, Any]:
    data = json.dumps(payload).encode("utf-8")
    request = urllib.request.Request(url, data=data, method="POST")
    request.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            body = response.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode("utf-8") if exc.fp else ""
        raise BackendError(f"completion request failed ({exc.code}): {detail}") from exc
    except urllib.error.URLError as exc:
        raise BackendError(f"completion endpoint unreachable: {exc.reason}") from exc
    except (socket.timeout, TimeoutError) as exc:
        raise BackendError(f"completion request timed out after {timeout}s") from exc
    try:
        parsed = json.loads(body)
    except json.JSONDecodeError as exc:
        raise BackendError("completion response is not JSON") from exc
    if not isinstance(parsed, dict):
        raise BackendError("completion response must be a JSON object")
    return parsed


class HttpBackend:
    """POST ``{"prompt": ...}`` and read ``{"text": ...}`` back."""

    identifier = "http"

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = 30.0,
        model: Optional[str] = None,
        temperature: Optional[float] = None,
    ) -> None:
        self.endpoint = os.environ.get(ENDPOINT_ENV) or endpoint
        self.timeout = timeout
        self.model = model
        self.temperature = temperature

    def complete(self, prompt: str) -> str:
        if not self.endpoint:
            raise BackendError(f"no endpoint configured (set {ENDPOINT_ENV})")
        payload: Dict[str, Any] = {"prompt": prompt}
        if self.model is not None:
            payload["model"] = self.model
        if self.temperature is not None:
            payload["temperature"] = self.temperature
        body = _post_json(self.endpoint, payload, self.timeout)
        text = body.get("text")
        if not isinstance(text, str):
            raise BackendError("completion response missing 'text'")
        return text


def complete(prompt: str, backend: CompletionBackend) -> str:
    logger.info("complete: start backend=%s", backend.identifier)
    reply = backend.complete(prompt)
    logger.info("complete: ok chars=%d", len(reply))
    return reply
