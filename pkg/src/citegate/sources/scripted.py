"""Fixture-driven stand-in for every retrieval source.

Fixture document layout (JSON)::

    {
      "crossref":  {"<normalized query>": [candidate, ...] | {"error": "<kind>"}},
      "arxiv":     {"<arxiv id>": candidate | null | {"error": "<kind>"}},
      "web_search": {"<normalized query>": [hit, ...]},
      "latency_ms": {"crossref": 120.0}
    }

Query keys are ``normalize_for_compare(clean_text(query))``. A ``"*"`` key
matches any query not listed explicitly. Unmatched queries yield no results.

The backend keeps a simulated per-thread clock that advances by the source's
configured latency on every call, so timing fields are reproducible.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..models import CandidatePublication, Source
from ..textsim import clean_text, normalize_for_compare
from .base import ErrorKind, RateLimiter, SourceClient, SourceFailure
from .websearch import parse_results


def query_key(query: str) -> str:
    return normalize_for_compare(clean_text(query))


@dataclass(frozen=True)
class CallRecord:
    source: Source
    op: str
    key: str
    timestamp: float


class ScriptedBackend:
    def __init__(self, fixtures: Optional[dict] = None, latency_ms: Optional[dict] = None):
        fixtures = dict(fixtures or {})
        latency = dict(fixtures.pop("latency_ms", {}) or {})
        latency.update(latency_ms or {})
        self.fixtures = {Source(k): v for k, v in fixtures.items()}
        self.latency = {Source(k): float(v) / 1000.0 for k, v in latency.items()}
        self.call_log: list = []
        self._log_lock = threading.Lock()
        self._local = threading.local()

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def clock(self) -> float:
        return getattr(self._local, "now", 0.0)

    def _advance(self, source: Source) -> None:
        self._local.now = self.clock() + self.latency.get(source, 0.0)

    def record(self, source: Source, op: str, key: str) -> None:
        with self._log_lock:
            self.call_log.append(CallRecord(source, op, key, time.monotonic()))
        self._advance(source)

    def calls(self, source: Optional[Source] = None) -> list:
        with self._log_lock:
            return [c for c in self.call_log if source is None or c.source is source]

    def lookup(self, source: Source, key: str):
        table = self.fixtures.get(source, {})
        if key in table:
            return True, table[key]
        if "*" in table:
            return True, table["*"]
        return False, None

    def client(self, source, rate_limiter: Optional[RateLimiter] = None) -> "ScriptedClient":
        return ScriptedClient(self, Source(source), rate_limiter)

    def clients(self, rate_limiters: Optional[dict] = None) -> dict:
        rate_limiters = rate_limiters or {}
        return {s: self.client(s, rate_limiters.get(s)) for s in Source}


def _raise_if_error(value) -> None:
    if isinstance(value, dict) and "error" in value:
        raise SourceFailure(ErrorKind(value["error"]), value.get("detail", "injected"))


class ScriptedClient(SourceClient):
    def __init__(self, backend: ScriptedBackend, name: Source,
                 rate_limiter: Optional[RateLimiter] = None):
        super().__init__(rate_limiter)
        self.backend = backend
        self.name = name

    def _search(self, query, year, limit):
        key = query_key(query)
        self.backend.record(self.name, "search", key)
        found, value = self.backend.lookup(self.name, key)
        if not found:
            return []
        _raise_if_error(value)
        if self.name is Source.WEB_SEARCH:
            return parse_results(value)
        return [CandidatePublication.from_dict(c, source=self.name) for c in value]

    def _lookup(self, arxiv_id):
        self.backend.record(self.name, "lookup", arxiv_id)
        found, value = self.backend.lookup(self.name, arxiv_id)
        if not found or value is None:
            return None
        _raise_if_error(value)
        cand = CandidatePublication.from_dict(value, source=self.name)
        if cand.arxiv_id != arxiv_id:
            cand = CandidatePublication.from_dict({**value, "arxiv_id": arxiv_id}, source=self.name)
        return cand
