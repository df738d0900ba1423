"""Retrieval-source clients: live adapters plus a scripted backend for tests."""

from __future__ import annotations

from typing import Optional

from ..models import Source, is_arxiv_id
from .arxiv import ArxivClient
from .base import (ErrorKind, HTTPSourceClient, RateLimiter, RetryPolicy, SourceClient,
                   SourceError)
from .crossref import CrossrefClient
from .openalex import OpenAlexClient
from .scripted import CallRecord, ScriptedBackend, ScriptedClient, query_key
from .semantic_scholar import SemanticScholarClient
from .websearch import HTTPWebSearchClient, WebSearchClient

__all__ = [
    "ArxivClient", "CallRecord", "CrossrefClient", "ErrorKind", "HTTPSourceClient",
    "HTTPWebSearchClient", "OpenAlexClient", "RateLimiter", "RetryPolicy", "ScriptedBackend",
    "ScriptedClient", "SemanticScholarClient", "SourceClient", "SourceError", "WebSearchClient",
    "DEFAULT_RATE_LIMITS", "live_clients", "lookup_arxiv", "query_key", "search", "web_search",
]

# (calls, period seconds) per source, following each service's polite-use guidance
DEFAULT_RATE_LIMITS = {
    Source.ARXIV: (1, 3.0),
    Source.CROSSREF: (10, 1.0),
    Source.SEMANTIC_SCHOLAR: (1, 1.0),
    Source.OPENALEX: (10, 1.0),
    Source.WEB_SEARCH: (1, 1.0),
}


def search(client: SourceClient, query: str, year: Optional[int] = None, limit: int = 10):
    if not query.strip():
        raise ValueError("query must be non-empty")
    return client.search(query, year, limit)


def lookup_arxiv(client: SourceClient, arxiv_id: str):
    if not is_arxiv_id(arxiv_id):
        raise ValueError(f"malformed arXiv id: {arxiv_id!r}")
    return client.lookup_id(arxiv_id)


def web_search(client: SourceClient, query: str, limit: int = 5):
    if not query.strip():
        raise ValueError("query must be non-empty")
    return client.search(query, None, limit)


def live_clients(timeout: float = 10.0, retries: int = 2, rate_limits: Optional[dict] = None,
                 web_endpoint: Optional[str] = None) -> dict:
    """Build live adapters sharing one rate limiter per source."""
    limits = dict(DEFAULT_RATE_LIMITS)
    limits.update({Source(k): tuple(v) for k, v in (rate_limits or {}).items()})
    policy = RetryPolicy(retries=retries)

    def kw(source):
        calls, period = limits[source]
        return {"timeout": timeout, "retry": policy, "rate_limiter": RateLimiter(calls, period)}

    clients = {
        Source.ARXIV: ArxivClient(**kw(Source.ARXIV)),
        Source.CROSSREF: CrossrefClient(**kw(Source.CROSSREF)),
        Source.SEMANTIC_SCHOLAR: SemanticScholarClient(**kw(Source.SEMANTIC_SCHOLAR)),
        Source.OPENALEX: OpenAlexClient(**kw(Source.OPENALEX)),
    }
    if web_endpoint:
        clients[Source.WEB_SEARCH] = HTTPWebSearchClient(web_endpoint, **kw(Source.WEB_SEARCH))
    return clients
