"""Semantic Scholar Graph API paper-search adapter."""

from __future__ import annotations

import os
from typing import Optional

from ..models import CandidatePublication, Source, is_arxiv_id
from .base import HTTPSourceClient, MalformedResponse, as_year, join_authors

API_URL = "https://api.semanticscholar.org/graph/v1/paper/search"
FIELDS = "title,authors,year,venue,url,externalIds"


def parse_payload(payload: dict) -> list:
    if not isinstance(payload, dict):
        raise MalformedResponse("Semantic Scholar payload is not an object")
    data = payload.get("data", [])
    if not isinstance(data, list):
        raise MalformedResponse("Semantic Scholar 'data' is not a list")
    out = []
    for item in data:
        title = item.get("title")
        if not title:
            continue
        ext = item.get("externalIds") or {}
        arxiv = ext.get("ArXiv")
        out.append(CandidatePublication(
            title=title,
            authors=join_authors(a.get("name", "") for a in item.get("authors") or []),
            year=as_year(item.get("year")),
            venue=item.get("venue") or None,
            url=item.get("url"),
            doi=ext.get("DOI"),
            arxiv_id=arxiv if arxiv and is_arxiv_id(arxiv) else None,
            source=Source.SEMANTIC_SCHOLAR,
        ))
    return out


class SemanticScholarClient(HTTPSourceClient):
    name = Source.SEMANTIC_SCHOLAR

    def __init__(self, api_key: Optional[str] = None, **kwargs):
        super().__init__(**kwargs)
        self.api_key = api_key if api_key is not None else os.environ.get("CITEGATE_S2_API_KEY")

    def _headers(self):
        headers = super()._headers()
        if self.api_key:
            headers["x-api-key"] = self.api_key
        return headers

    def _search(self, query, year, limit):
        params = {"query": query, "limit": limit, "fields": FIELDS}
        return parse_payload(self._get_json(API_URL, params))
