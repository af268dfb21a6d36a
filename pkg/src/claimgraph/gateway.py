"""Pluggable text-generation backends with exact-replay caching.

Reproducibility of sampled text comes from the record/replay cache rather
than seeding: hosted APIs are nondeterministic at nonzero temperature, so a
warm cache is the only way to replay a run byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from .errors import (
    BackendError,
    ConfigError,
    EmptyCompletion,
    NetworkError,
    ScenarioMiss,
)

STAGE_TAGS = ("sample", "decompose", "merge", "entail", "vc", "ptrue", "integrate")

# Retryable transport-level statuses; everything else fails immediately.
_TRANSIENT_STATUSES = frozenset({408, 429, 500, 502, 503, 504})


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    temperature: float
    stage_tag: str
    sample_index: int = 0
    max_tokens: int = 1024

    def __post_init__(self) -> None:
        if self.stage_tag not in STAGE_TAGS:
            raise ValueError(f"unknown stage tag: {self.stage_tag!r}")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.sample_index < 0:
            raise ValueError("sample_index must be non-negative")
        if self.temperature == 0 and self.sample_index != 0:
            raise ValueError("temperature-0 requests share sample_index 0")


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "scripted"
    endpoint: str = ""
    model_name: str = ""
    api_key_env: str = "CLAIMGRAPH_API_KEY"
    timeout: float = 30.0
    max_retries: int = 3
    backoff_base: float = 0.5
    max_in_flight: int = 4
    scenario_path: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ("http_compatible", "scripted"):
            raise ConfigError(f"unknown backend kind: {self.kind!r}")
        if self.kind == "http_compatible" and not (self.endpoint and self.model_name):
            raise ConfigError("http_compatible backend needs endpoint and model_name")
        if self.max_in_flight < 1:
            raise ConfigError("max_in_flight must be at least 1")


def cache_key(cfg: BackendConfig, req: GenerationRequest) -> str:
    """Collision-resistant digest of everything that determines a completion."""
    material = json.dumps(
        [cfg.kind, cfg.model_name, req.prompt, req.temperature, req.sample_index],
        ensure_ascii=False,
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ReplayCache:
    """Append-only JSONL cache keyed by request digest.

    Each record is one self-delimiting line, so a partially written trailing
    record after a crash is simply dropped on load.
    """

    def __init__(self, path: Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, str] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        assert self.path is not None
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                self._entries[record["key"]] = record["value"]
            except (json.JSONDecodeError, KeyError, TypeError):
                continue  # torn or foreign line

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, value: str) -> None:
        record = json.dumps(
            {"key": key, "value": value, "created_at": time.time()},
            ensure_ascii=False,
        )
        with self._lock:
            self._entries[key] = value
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(record + "\n")

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class StageCounters:
    requests: int = 0
    prompt_chars: int = 0
    completion_chars: int = 0
    cache_hits: int = 0


class CallLedger:
    """Per-stage request and character accounting; thread-safe."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.stages: dict[str, StageCounters] = {tag: StageCounters() for tag in STAGE_TAGS}

    def record(self, req: GenerationRequest, completion: str, cache_hit: bool) -> None:
        with self._lock:
            counters = self.stages[req.stage_tag]
            counters.requests += 1
            counters.prompt_chars += len(req.prompt)
            counters.completion_chars += len(completion)
            if cache_hit:
                counters.cache_hits += 1

    def to_dict(self) -> dict[str, dict[str, int]]:
        with self._lock:
            return {
                tag: {
                    "requests": c.requests,
                    "prompt_chars": c.prompt_chars,
                    "completion_chars": c.completion_chars,
                    "cache_hits": c.cache_hits,
                }
                for tag, c in self.stages.items()
            }

    def merge_from(self, data: dict[str, dict[str, int]]) -> None:
        """Fold previously persisted counts into this ledger."""
        with self._lock:
            for tag, counts in data.items():
                if tag not in self.stages:
                    continue
                c = self.stages[tag]
                c.requests += counts.get("requests", 0)
                c.prompt_chars += counts.get("prompt_chars", 0)
                c.completion_chars += counts.get("completion_chars", 0)
                c.cache_hits += counts.get("cache_hits", 0)


def ledger_report(ledger: CallLedger) -> list[dict[str, int | str]]:
    """Rows sorted by stage tag, one per stage."""
    data = ledger.to_dict()
    return [
        {"stage": tag, **data[tag]}
        for tag in sorted(data)
    ]


class Backend(Protocol):
    def complete(self, req: GenerationRequest) -> str: ...


class HttpBackend:
    """Chat-completions-style JSON POST against a configurable endpoint."""

    def __init__(self, cfg: BackendConfig, client: httpx.Client | None = None) -> None:
        self.cfg = cfg
        self._client = client or httpx.Client(timeout=cfg.timeout)
        self._sleep = time.sleep

    def _headers(self) -> dict[str, str]:
        import os

        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.cfg.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, req: GenerationRequest) -> str:
        payload = {
            "model": self.cfg.model_name,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        }
        last_error: Exception | None = None
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                self._sleep(self.cfg.backoff_base * 2 ** (attempt - 1))
            try:
                response = self._client.post(
                    self.cfg.endpoint, json=payload, headers=self._headers()
                )
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in _TRANSIENT_STATUSES:
                last_error = BackendError(f"transient status {response.status_code}")
                continue
            if response.status_code != 200:
                raise BackendError(
                    f"backend returned status {response.status_code}: {response.text[:200]}"
                )
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise BackendError(f"malformed completion payload: {exc}") from exc
        raise NetworkError(f"request failed after {self.cfg.max_retries + 1} attempts: {last_error}")


class Gateway:
    """Cache-first generation front end shared by all pipeline stages."""

    def __init__(
        self,
        cfg: BackendConfig,
        backend: Backend,
        cache: ReplayCache | None = None,
        ledger: CallLedger | None = None,
    ) -> None:
        self.cfg = cfg
        self.backend = backend
        self.cache = cache if cache is not None else ReplayCache()
        self.ledger = ledger if ledger is not None else CallLedger()
        self._in_flight = threading.Semaphore(cfg.max_in_flight)

    def generate(self, req: GenerationRequest) -> str:
        key = cache_key(self.cfg, req)
        cached = self.cache.get(key)
        if cached is not None:
            self.ledger.record(req, cached, cache_hit=True)
            return cached
        with self._in_flight:
            text = self.backend.complete(req)
        if not text or not text.strip():
            raise EmptyCompletion(f"backend returned no text for stage {req.stage_tag}")
        self.cache.put(key, text)
        self.ledger.record(req, text, cache_hit=False)
        return text


def make_gateway(
    cfg: BackendConfig,
    cache_path: Path | None = None,
    ledger: CallLedger | None = None,
    client: httpx.Client | None = None,
) -> Gateway:
    """Construct a gateway for the configured backend kind."""
    cache = ReplayCache(cache_path)
    if cfg.kind == "http_compatible":
        backend: Backend = HttpBackend(cfg, client=client)
    else:
        from .synth import ScenarioTable, ScriptedBackend

        if not cfg.scenario_path:
            raise ConfigError("scripted backend requires a scenario path")
        table = ScenarioTable.load(Path(cfg.scenario_path))
        backend = ScriptedBackend(table)
    return Gateway(cfg, backend, cache=cache, ledger=ledger)


_SCENARIO_MISS = ScenarioMiss  # re-export guard so callers import from one place
