"""Single abstraction over text-completion backends.

Two backends: a live client speaking the chat-completions wire protocol, and
a transcript keyed by request fingerprint for deterministic offline replay.
Record mode runs live and captures every (fingerprint, response) pair so the
same run replays byte-identically later. Live output is treated as
nondeterministic regardless of temperature, so nothing may assert equality
across live calls.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import httpx

from .errors import AuthError, ReplayMiss, TransportError

DEFAULT_MODEL_ID = "gpt-4-0613"
DEFAULT_TEMPERATURE = 0.0

STAGE_TAGS = (
    "InstructionFollowing",
    "RobotMotion",
    "CodeGen",
    "Feedback",
    "EndToEndAblation",
)

MODE_REPLAY = "Replay"
MODE_RECORD = "Record"
MODE_PASSTHROUGH = "Passthrough"

ENDPOINT_ENV = "GENEM_LLM_ENDPOINT"
KEY_ENV = "GENEM_LLM_KEY"

MAX_ATTEMPTS = 3
BACKOFF_BASE_S = 0.5


def default_transcript_dir() -> Path:
    """Directory of the transcripts shipped with the package."""
    return Path(str(resources.files("genem"))) / "data" / "transcripts"


@dataclass(frozen=True)
class CompletionRequest:
    stage_tag: str
    messages: tuple[tuple[str, str], ...]  # (role, content)
    model_id: str = DEFAULT_MODEL_ID
    temperature: float = DEFAULT_TEMPERATURE
    variant: int = 0  # distinguishes repeated samples of the same prompt

    def __post_init__(self):
        if self.stage_tag not in STAGE_TAGS:
            raise ValueError(f"unknown stage tag {self.stage_tag!r}")
        if not self.messages:
            raise ValueError("a completion request needs at least one message")
        if self.messages[0][0] != "system":
            raise ValueError("the first message must have the system role")
        for role, _ in self.messages:
            if role not in ("system", "user", "assistant"):
                raise ValueError(f"unknown message role {role!r}")


def fingerprint(request: CompletionRequest) -> str:
    """Deterministic content hash; trailing whitespace per message is ignored."""
    canonical = json.dumps(
        [
            request.stage_tag,
            request.model_id,
            request.temperature,
            request.variant,
            [[role, content.rstrip()] for role, content in request.messages],
        ],
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class Transcript:
    """Stage-tagged responses keyed by request fingerprint."""

    entries: list[dict] = field(default_factory=list)
    _by_fingerprint: dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for entry in self.entries:
            self._index(entry)

    def _index(self, entry: dict) -> None:
        fp = entry["fingerprint"]
        existing = self._by_fingerprint.get(fp)
        if existing is not None and existing != entry["response"]:
            raise ValueError(f"conflicting responses for fingerprint {fp}")
        self._by_fingerprint[fp] = entry["response"]

    def lookup(self, fp: str) -> str | None:
        return self._by_fingerprint.get(fp)

    def append(self, stage: str, fp: str, response: str) -> bool:
        """Record an entry; existing fingerprints are never clobbered."""
        if fp in self._by_fingerprint:
            return False
        entry = {"stage": stage, "fingerprint": fp, "response": response}
        self.entries.append(entry)
        self._index(entry)
        return True

    def to_dict(self) -> dict:
        return {"version": 1, "entries": self.entries}

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, ensure_ascii=False))

    @classmethod
    def load(cls, path: str | Path) -> "Transcript":
        d = json.loads(Path(path).read_text())
        return cls(list(d["entries"]))

    @classmethod
    def load_dir(cls, directory: str | Path) -> "Transcript":
        """Merge every *.json transcript in a directory."""
        merged = cls()
        for path in sorted(Path(directory).glob("*.json")):
            for entry in cls.load(path).entries:
                merged.append(entry["stage"], entry["fingerprint"], entry["response"])
        return merged


class HttpChatBackend:
    """Live chat-completions client; endpoint and key come from the environment."""

    def __init__(
        self,
        endpoint: str,
        api_key: str,
        timeout_s: float = 60.0,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout_s = timeout_s
        self.sleeper = sleeper

    @classmethod
    def from_env(cls, environ) -> "HttpChatBackend":
        endpoint = environ.get(ENDPOINT_ENV)
        key = environ.get(KEY_ENV)
        if not endpoint or not key:
            raise AuthError(
                f"live backend needs {ENDPOINT_ENV} and {KEY_ENV} in the environment"
            )
        return cls(endpoint, key)

    def complete_text(self, request: CompletionRequest) -> str:
        body = {
            "model": request.model_id,
            "temperature": request.temperature,
            "messages": [
                {"role": role, "content": content} for role, content in request.messages
            ],
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            if attempt:
                self.sleeper(BACKOFF_BASE_S * 2 ** (attempt - 1))
            try:
                response = httpx.post(
                    self.endpoint, json=body, headers=headers, timeout=self.timeout_s
                )
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"completion endpoint rejected credentials: {response.status_code}")
            if response.status_code >= 400:
                last_error = TransportError(
                    f"completion endpoint returned {response.status_code}: {response.text[:200]}"
                )
                continue
            payload = response.json()
            try:
                return payload["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError) as exc:
                raise TransportError(f"malformed completion payload: {exc}") from exc
        raise TransportError(f"completion failed after {MAX_ATTEMPTS} attempts: {last_error}")


class ScriptedBackend:
    """Computes responses from a callable; used for tests and transcript authoring."""

    def __init__(self, responder: Callable[[CompletionRequest], str]):
        self.responder = responder

    def complete_text(self, request: CompletionRequest) -> str:
        return self.responder(request)


class Gateway:
    """Routes completion requests to a backend, replaying or recording."""

    def __init__(self, mode: str = MODE_REPLAY, backend=None, transcript: Transcript | None = None):
        if mode not in (MODE_REPLAY, MODE_RECORD, MODE_PASSTHROUGH):
            raise ValueError(f"unknown gateway mode {mode!r}")
        if mode == MODE_REPLAY and transcript is None:
            raise ValueError("replay mode needs a transcript")
        if mode in (MODE_RECORD, MODE_PASSTHROUGH) and backend is None:
            raise ValueError(f"{mode} mode needs a live backend")
        self.mode = mode
        self.backend = backend
        self.transcript = transcript if transcript is not None else Transcript()
        self._write_lock = threading.Lock()

    @classmethod
    def replay(cls, transcript: Transcript) -> "Gateway":
        return cls(MODE_REPLAY, transcript=transcript)

    @classmethod
    def replay_dir(cls, directory: str | Path) -> "Gateway":
        return cls.replay(Transcript.load_dir(directory))

    def complete(self, request: CompletionRequest) -> str:
        fp = fingerprint(request)
        if self.mode == MODE_REPLAY:
            response = self.transcript.lookup(fp)
            if response is None:
                raise ReplayMiss(request.stage_tag, fp)
            return response
        response = self.backend.complete_text(request)
        if self.mode == MODE_RECORD:
            with self._write_lock:
                self.transcript.append(request.stage_tag, fp, response)
        return response
