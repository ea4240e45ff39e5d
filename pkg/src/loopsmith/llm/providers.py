"""Chat-completion providers: HTTP endpoint, deterministic replay, and a
canned-transform stub so the whole pipeline runs offline."""

from __future__ import annotations

import hashlib
import json
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import AuthError, ProviderTimeout, RateLimited

ENV_URL = "LOOPSMITH_LLM_URL"
ENV_KEY = "LOOPSMITH_LLM_API_KEY"
ENV_MODEL = "LOOPSMITH_LLM_MODEL"


@dataclass
class ChatMessage:
    role: str
    text: str


@dataclass
class ChatTranscript:
    messages: list = field(default_factory=list)
    model: str = "default"
    temperature: float = 0.0  # deterministic generation by default

    def add(self, role: str, text: str) -> "ChatTranscript":
        self.messages.append(ChatMessage(role, text))
        return self

    def clone(self) -> "ChatTranscript":
        return ChatTranscript(
            messages=list(self.messages), model=self.model, temperature=self.temperature
        )


def transcript_hash(transcript: ChatTranscript) -> str:
    blob = json.dumps(
        {
            "model": transcript.model,
            "temperature": transcript.temperature,
            "messages": [[m.role, m.text] for m in transcript.messages],
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def complete(provider, transcript: ChatTranscript) -> str:
    """Ask the provider for the next assistant message and append it."""
    text = provider.complete(transcript)
    transcript.add("assistant", text)
    return text


class HttpChatProvider:
    """Generic chat-completion HTTP endpoint (OpenAI-style JSON shape)."""

    def __init__(self, url: str, api_key: str | None, model: str,
                 timeout: float = 120.0, max_retries: int = 3):
        self.url = url
        self.api_key = api_key
        self.model = model
        self.timeout = timeout
        self.max_retries = max_retries

    @staticmethod
    def from_env() -> "HttpChatProvider":
        url = os.environ.get(ENV_URL, "")
        if not url:
            raise AuthError(f"{ENV_URL} is not configured")
        return HttpChatProvider(
            url=url,
            api_key=os.environ.get(ENV_KEY),
            model=os.environ.get(ENV_MODEL, "default"),
        )

    def complete(self, transcript: ChatTranscript) -> str:
        if not self.api_key:
            raise AuthError("missing API key")  # before any network call
        payload = json.dumps(
            {
                "model": self.model or transcript.model,
                "temperature": transcript.temperature,
                "messages": [
                    {"role": m.role, "content": m.text} for m in transcript.messages
                ],
            }
        ).encode()
        last = None
        for attempt in range(self.max_retries):
            request = urllib.request.Request(
                self.url,
                data=payload,
                headers={
                    "Content-Type": "application/json",
                    "Authorization": f"Bearer {self.api_key}",
                },
            )
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    doc = json.loads(resp.read().decode())
                    return doc["choices"][0]["message"]["content"]
            except urllib.error.HTTPError as exc:
                if exc.code == 401:
                    raise AuthError("endpoint rejected credentials") from exc
                if exc.code == 429:
                    last = RateLimited("rate limited")
                else:
                    last = ProviderTimeout(f"HTTP {exc.code}")
            except (urllib.error.URLError, TimeoutError, OSError) as exc:
                last = ProviderTimeout(str(exc))
            time.sleep(0.5 * 2 ** attempt)
        raise last


class ReplayProvider:
    """Deterministic playback of a recorded fixture.

    The fixture is an ordered list of {"request_sha256", "response"} docs;
    responses are consumed in call order. strict=True additionally requires
    each recorded request hash to match the live transcript.
    """

    def __init__(self, fixture: list, strict: bool = False):
        self.fixture = list(fixture)
        self.strict = strict
        self.cursor = 0
        self.mismatches: list = []

    @staticmethod
    def from_file(path) -> "ReplayProvider":
        doc = json.loads(Path(path).read_text())
        return ReplayProvider(doc["exchanges"])

    def complete(self, transcript: ChatTranscript) -> str:
        if self.cursor >= len(self.fixture):
            raise ProviderTimeout("replay fixture exhausted")
        entry = self.fixture[self.cursor]
        self.cursor += 1
        recorded = entry.get("request_sha256")
        actual = transcript_hash(transcript)
        if recorded and recorded != actual:
            self.mismatches.append((self.cursor - 1, recorded, actual))
            if self.strict:
                raise ProviderTimeout(
                    f"fixture request {self.cursor - 1} does not match transcript"
                )
        return entry["response"]


class CaptureProvider:
    """Wrap another provider and record (request hash, response) exchanges."""

    def __init__(self, inner):
        self.inner = inner
        self.exchanges: list = []

    def complete(self, transcript: ChatTranscript) -> str:
        response = self.inner.complete(transcript)
        self.exchanges.append(
            {"request_sha256": transcript_hash(transcript), "response": response}
        )
        return response

    def save(self, path) -> None:
        Path(path).write_text(json.dumps({"exchanges": self.exchanges}, indent=2))


class CannedTransformProvider:
    """Stub model: applies a fixed legal transformation to the target region
    found in the prompt, so offline pipeline tests get a working candidate."""

    def __init__(self, transform=None):
        if transform is None:
            from ..backend import optimize_region_conservative

            transform = optimize_region_conservative
        self.transform = transform

    def complete(self, transcript: ChatTranscript) -> str:
        from .prompts import find_target_code

        prompt = next(
            m.text for m in reversed(transcript.messages) if m.role == "user"
        )
        region = find_target_code(prompt)
        optimized = self.transform(region)
        return f"Applying a conservative legal transformation.\n\n```c\n{optimized}\n```\n"


class AuditLog:
    """Append-only JSONL of every live exchange, for fixture capture."""

    def __init__(self, path):
        self.path = Path(path)

    def record(self, transcript: ChatTranscript, response: str) -> None:
        entry = {
            "request_sha256": transcript_hash(transcript),
            "model": transcript.model,
            "response": response,
        }
        with self.path.open("a") as fh:
            fh.write(json.dumps(entry) + "\n")
