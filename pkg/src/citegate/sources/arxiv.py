"""arXiv export-API identifier lookup."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional

from ..models import CandidatePublication, Source, is_arxiv_id
from .base import HTTPSourceClient, MalformedResponse, as_year, join_authors

API_URL = "https://export.arxiv.org/api/query"
_NS = {"a": "http://www.w3.org/2005/Atom", "arxiv": "http://arxiv.org/schemas/atom"}


def _text(node, path) -> Optional[str]:
    found = node.find(path, _NS)
    if found is None or found.text is None:
        return None
    return " ".join(found.text.split())


def parse_feed(xml_text: str, arxiv_id: str) -> Optional[CandidatePublication]:
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedResponse(f"arXiv feed is not XML: {exc}") from exc
    for entry in root.findall("a:entry", _NS):
        title = _text(entry, "a:title")
        entry_id = _text(entry, "a:id") or ""
        # unknown ids come back as a single entry titled "Error"
        if not title or title == "Error" or "/api/errors" in entry_id:
            continue
        return CandidatePublication(
            title=title,
            authors=join_authors(_text(a, "a:name") or "" for a in entry.findall("a:author", _NS)),
            year=as_year(_text(entry, "a:published")),
            venue=_text(entry, "arxiv:journal_ref"),
            url=entry_id or None,
            doi=_text(entry, "arxiv:doi"),
            arxiv_id=arxiv_id,
            source=Source.ARXIV,
        )
    return None


class ArxivClient(HTTPSourceClient):
    name = Source.ARXIV

    def _lookup(self, arxiv_id):
        if not is_arxiv_id(arxiv_id):
            raise ValueError(f"malformed arXiv id: {arxiv_id!r}")
        resp = self._get(API_URL, {"id_list": arxiv_id, "max_results": 1})
        return parse_feed(resp.text, arxiv_id)
