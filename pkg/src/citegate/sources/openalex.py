"""OpenAlex works-search adapter."""

from __future__ import annotations

import os
from typing import Optional

from ..models import CandidatePublication, Source
from ..parser import extract_arxiv_id
from .base import HTTPSourceClient, MalformedResponse, as_year, join_authors

API_URL = "https://api.openalex.org/works"
_DOI_PREFIX = "https://doi.org/"


def parse_payload(payload: dict) -> list:
    if not isinstance(payload, dict) or not isinstance(payload.get("results"), list):
        raise MalformedResponse("OpenAlex payload lacks 'results'")
    out = []
    for item in payload["results"]:
        title = item.get("title") or item.get("display_name")
        if not title:
            continue
        doi = item.get("doi")
        if doi and doi.startswith(_DOI_PREFIX):
            doi = doi[len(_DOI_PREFIX):]
        location = item.get("primary_location") or {}
        venue = (location.get("source") or {}).get("display_name")
        url = location.get("landing_page_url") or item.get("id")
        out.append(CandidatePublication(
            title=title,
            authors=join_authors((a.get("author") or {}).get("display_name", "")
                                 for a in item.get("authorships") or []),
            year=as_year(item.get("publication_year")),
            venue=venue,
            url=url,
            doi=doi or None,
            arxiv_id=extract_arxiv_id(url) if url else None,
            source=Source.OPENALEX,
        ))
    return out


class OpenAlexClient(HTTPSourceClient):
    name = Source.OPENALEX

    def __init__(self, mailto: Optional[str] = None, **kwargs):
        super().__init__(**kwargs)
        self.mailto = mailto if mailto is not None else os.environ.get("CITEGATE_OPENALEX_MAILTO")

    def _search(self, query, year, limit):
        params = {"search": query, "per-page": limit}
        if self.mailto:
            params["mailto"] = self.mailto
        return parse_payload(self._get_json(API_URL, params))
