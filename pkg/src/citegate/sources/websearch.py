"""Search-backed fallback stage.

Free-form results are converted into candidate records: structured hits keep
their fields, plain-text hits go through the citation parser. Hits without a
recoverable title are dropped.
"""

from __future__ import annotations

import os
from typing import Optional

from ..models import CandidatePublication, Source
from ..parser import parse_rule_based
from ..textsim import clean_text
from .base import HTTPSourceClient, MalformedResponse, SourceClient, as_year


def candidate_from_hit(hit) -> Optional[CandidatePublication]:
    if isinstance(hit, str):
        parsed = parse_rule_based(hit)
        fields = {"title": parsed.title, "authors": parsed.authors, "year": parsed.year,
                  "url": parsed.url, "doi": parsed.doi, "arxiv_id": parsed.arxiv_id}
    elif isinstance(hit, dict):
        fields = dict(hit)
    else:
        return None
    title = clean_text(fields.get("title") or "")
    if not title:
        return None
    return CandidatePublication(
        title=title,
        authors=fields.get("authors") or "",
        year=as_year(fields.get("year")),
        venue=fields.get("venue"),
        url=fields.get("url"),
        doi=fields.get("doi"),
        arxiv_id=fields.get("arxiv_id"),
        source=Source.WEB_SEARCH,
        confidence=0.0,
    )


def parse_results(hits) -> list:
    if not isinstance(hits, list):
        raise MalformedResponse("web-search results must be a list")
    return [c for c in (candidate_from_hit(h) for h in hits) if c is not None]


class WebSearchClient(SourceClient):
    """Wraps any callable ``query -> list of hits`` as the web-search stage."""

    name = Source.WEB_SEARCH

    def __init__(self, search_fn, **kwargs):
        super().__init__(**kwargs)
        self.search_fn = search_fn

    def _search(self, query, year, limit):
        return parse_results(self.search_fn(query))


class HTTPWebSearchClient(HTTPSourceClient):
    """GET ``endpoint?q=...`` returning ``{"results": [...]}``; bearer key from the env."""

    name = Source.WEB_SEARCH

    def __init__(self, endpoint: str, api_key: Optional[str] = None, **kwargs):
        super().__init__(**kwargs)
        self.endpoint = endpoint
        self.api_key = api_key if api_key is not None else os.environ.get("CITEGATE_SEARCH_API_KEY")

    def _headers(self):
        headers = super()._headers()
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _search(self, query, year, limit):
        payload = self._get_json(self.endpoint, {"q": query, "limit": limit})
        if not isinstance(payload, dict):
            raise MalformedResponse("web-search payload is not an object")
        return parse_results(payload.get("results"))
