"""CrossRef works-search adapter."""

from __future__ import annotations

import os
from typing import Optional

from ..models import CandidatePublication, Source
from ..parser import extract_arxiv_id
from .base import HTTPSourceClient, MalformedResponse, as_year, join_authors

API_URL = "https://api.crossref.org/works"


def _issued_year(item: dict) -> Optional[int]:
    for key in ("issued", "published-print", "published-online", "published"):
        parts = (item.get(key) or {}).get("date-parts") or []
        if parts and parts[0] and parts[0][0] is not None:
            return as_year(parts[0][0])
    return None


def _first(values) -> Optional[str]:
    if isinstance(values, list):
        return values[0] if values else None
    return values


def parse_payload(payload: dict) -> list:
    if not isinstance(payload, dict) or "message" not in payload:
        raise MalformedResponse("CrossRef payload lacks 'message'")
    items = payload["message"].get("items")
    if not isinstance(items, list):
        raise MalformedResponse("CrossRef payload lacks 'message.items'")
    out = []
    for item in items:
        title = _first(item.get("title"))
        if not title:
            continue
        names = []
        for a in item.get("author") or []:
            name = a.get("name") or " ".join(p for p in (a.get("given"), a.get("family")) if p)
            names.append(name)
        url = item.get("URL")
        out.append(CandidatePublication(
            title=title,
            authors=join_authors(names),
            year=_issued_year(item),
            venue=_first(item.get("container-title")),
            url=url,
            doi=item.get("DOI"),
            arxiv_id=extract_arxiv_id(url) if url else None,
            source=Source.CROSSREF,
        ))
    return out


class CrossrefClient(HTTPSourceClient):
    name = Source.CROSSREF

    def __init__(self, mailto: Optional[str] = None, **kwargs):
        super().__init__(**kwargs)
        self.mailto = mailto if mailto is not None else os.environ.get("CITEGATE_CROSSREF_MAILTO")

    def _search(self, query, year, limit):
        params = {"query.bibliographic": query, "rows": limit}
        if self.mailto:
            params["mailto"] = self.mailto
        return parse_payload(self._get_json(API_URL, params))
