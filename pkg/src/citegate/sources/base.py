"""Client interface, error records, rate limiting and HTTP plumbing."""

from __future__ import annotations

import logging
import threading
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import requests

from ..models import CandidatePublication, Source

log = logging.getLogger(__name__)


class ErrorKind(str, Enum):
    TIMEOUT = "timeout"
    RATE_LIMITED = "rate_limited"
    TRANSPORT = "transport"
    MALFORMED_RESPONSE = "malformed_response"


@dataclass(frozen=True)
class SourceError:
    """A failed source call. Returned, never raised."""

    source: Source
    kind: ErrorKind
    detail: str = ""


SearchResult = Union[list, SourceError]
LookupResult = Union[CandidatePublication, None, SourceError]


class MalformedResponse(Exception):
    pass


class RateLimiter:
    """Sliding-window limiter: at most ``calls`` acquisitions per ``period`` seconds."""

    def __init__(self, calls: int, period: float, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if calls < 1 or period <= 0:
            raise ValueError("need calls >= 1 and period > 0")
        self.calls = calls
        self.period = period
        self._clock = clock
        self._sleep = sleep
        self._stamps: deque = deque()
        self._lock = threading.Lock()

    def acquire(self) -> float:
        """Block until a slot is free; return seconds spent waiting."""
        waited = 0.0
        while True:
            with self._lock:
                now = self._clock()
                while self._stamps and now - self._stamps[0] >= self.period:
                    self._stamps.popleft()
                if len(self._stamps) < self.calls:
                    self._stamps.append(now)
                    return waited
                delay = self.period - (now - self._stamps[0])
            self._sleep(delay)
            waited += delay


class SourceClient:
    """Uniform search/lookup surface over one retrieval source.

    Subclasses implement ``_search`` / ``_lookup`` and may raise freely; the
    public methods convert every failure into a :class:`SourceError`.
    """

    name: Source

    def __init__(self, rate_limiter: Optional[RateLimiter] = None):
        self.rate_limiter = rate_limiter

    def search(self, query: str, year: Optional[int] = None, limit: int = 10) -> SearchResult:
        return self._guarded(lambda: self._search(query, year, limit)[:limit])

    def lookup_id(self, arxiv_id: str) -> LookupResult:
        return self._guarded(lambda: self._lookup(arxiv_id))

    def _search(self, query: str, year: Optional[int], limit: int) -> list:
        return []

    def _lookup(self, arxiv_id: str) -> Optional[CandidatePublication]:
        return None

    def _guarded(self, call):
        if self.rate_limiter is not None:
            self.rate_limiter.acquire()
        try:
            return call()
        except SourceFailure as exc:
            return SourceError(self.name, exc.kind, exc.detail)
        except MalformedResponse as exc:
            return SourceError(self.name, ErrorKind.MALFORMED_RESPONSE, str(exc))
        except requests.Timeout as exc:
            return SourceError(self.name, ErrorKind.TIMEOUT, str(exc))
        except requests.RequestException as exc:
            return SourceError(self.name, ErrorKind.TRANSPORT, str(exc))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            return SourceError(self.name, ErrorKind.MALFORMED_RESPONSE, repr(exc))
        except Exception as exc:  # noqa: BLE001 - no failure may escape a source
            log.warning("%s client raised unexpectedly", self.name.value, exc_info=True)
            return SourceError(self.name, ErrorKind.TRANSPORT, repr(exc))


class SourceFailure(Exception):
    def __init__(self, kind: ErrorKind, detail: str = ""):
        super().__init__(f"{kind.value}: {detail}")
        self.kind = kind
        self.detail = detail


@dataclass(frozen=True)
class RetryPolicy:
    retries: int = 2
    backoff: float = 0.5

    def delay(self, attempt: int) -> float:
        return self.backoff * (2 ** attempt)


_RETRYABLE = (ErrorKind.TIMEOUT, ErrorKind.TRANSPORT)


class HTTPSourceClient(SourceClient):
    """Base for live adapters: session, timeout, bounded retries."""

    def __init__(self, session: Optional[requests.Session] = None, timeout: float = 10.0,
                 retry: RetryPolicy = RetryPolicy(), rate_limiter: Optional[RateLimiter] = None,
                 user_agent: str = "citegate/0.1", sleep: Callable[[float], None] = time.sleep):
        super().__init__(rate_limiter)
        self.session = session or requests.Session()
        self.timeout = timeout
        self.retry = retry
        self.user_agent = user_agent
        self._sleep = sleep

    def _headers(self) -> dict:
        return {"User-Agent": self.user_agent}

    def _once(self, url: str, params: dict) -> requests.Response:
        try:
            resp = self.session.get(url, params=params, headers=self._headers(),
                                    timeout=self.timeout)
        except requests.Timeout as exc:
            raise SourceFailure(ErrorKind.TIMEOUT, str(exc)) from exc
        except requests.RequestException as exc:
            raise SourceFailure(ErrorKind.TRANSPORT, str(exc)) from exc
        if resp.status_code == 429:
            raise SourceFailure(ErrorKind.RATE_LIMITED, f"HTTP 429 from {url}")
        if resp.status_code >= 500:
            raise SourceFailure(ErrorKind.TRANSPORT, f"HTTP {resp.status_code} from {url}")
        if resp.status_code >= 400:
            raise SourceFailure(ErrorKind.MALFORMED_RESPONSE,
                                f"HTTP {resp.status_code} from {url}")
        return resp

    def _get(self, url: str, params: dict) -> requests.Response:
        attempt = 0
        while True:
            try:
                return self._once(url, params)
            except SourceFailure as exc:
                if exc.kind not in _RETRYABLE or attempt >= self.retry.retries:
                    raise
                self._sleep(self.retry.delay(attempt))
                attempt += 1

    def _get_json(self, url: str, params: dict):
        resp = self._get(url, params)
        try:
            return resp.json()
        except ValueError as exc:
            raise MalformedResponse(f"invalid JSON from {url}") from exc


def join_authors(names) -> str:
    return ", ".join(n.strip() for n in names if n and n.strip())


def as_year(value) -> Optional[int]:
    if value is None or value == "":
        return None
    try:
        year = int(str(value)[:4])
    except ValueError:
        return None
    return year if 1500 <= year <= 2100 else None
