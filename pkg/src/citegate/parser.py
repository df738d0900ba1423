"""Rule-based citation parsing with an optional fallback parser.

The rules target the normalized surface form ``[Authors, Year, Title](URL)``
and degrade to picking a year and a URL out of free text.
"""

from __future__ import annotations

import logging
import re
from dataclasses import replace
from typing import Optional, Protocol

from .models import YEAR_MAX, YEAR_MIN, ParseMethod, ParsedCitation, is_arxiv_id
from .textsim import clean_text

log = logging.getLogger(__name__)

_YEAR_TOKEN = re.compile(r"(?<![\w.])(\d{4})(?![\w.])")
_URL_TOKEN = re.compile(r"https?://[^\s<>\"']+")
_ARXIV_LEGACY_URL = re.compile(
    r"arxiv\.org/(?:abs|pdf)/([a-z][a-z\-]*(?:\.[A-Z]{2})?/\d{7})(?:v\d+)?(?:\.pdf)?", re.I)
_ARXIV_URL = re.compile(r"arxiv\.org/(?:abs|pdf)/(?:[a-z\-.]+/)?(\d{4}\.\d{4,5})(?:v\d+)?", re.I)
_ARXIV_TEXT = re.compile(r"\barXiv:\s?(\d{4}\.\d{4,5})(?:v\d+)?", re.I)
_DOI = re.compile(r"(10\.\d{4,9}/[^\s\"'<>]+)")
_DOI_TRAILING = ".,;:)]}"


class FallbackParser(Protocol):
    def parse(self, text: str) -> Optional[ParsedCitation]:
        ...


def _first_year(text: str) -> Optional[re.Match]:
    for m in _YEAR_TOKEN.finditer(text):
        if YEAR_MIN <= int(m.group(1)) <= YEAR_MAX:
            return m
    return None


def extract_arxiv_id(url: str) -> Optional[str]:
    for pattern in (_ARXIV_LEGACY_URL, _ARXIV_URL):
        m = pattern.search(url)
        if m and is_arxiv_id(m.group(1)):
            return m.group(1)
    return None


def extract_doi(text: str) -> Optional[str]:
    m = _DOI.search(text)
    if not m:
        return None
    doi = m.group(1).rstrip(_DOI_TRAILING)
    if doi.lower().endswith(".pdf"):
        doi = doi[:-4]
    return doi or None


def _split_link(text: str):
    """Return (body, url) for ``[body](url)`` or None."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith(")")):
        return None
    cut = s.rfind("](")
    if cut <= 0:
        return None
    return s[1:cut], s[cut + 2:-1].strip()


def _clean_or_none(s: Optional[str]) -> Optional[str]:
    if s is None:
        return None
    cleaned = clean_text(s).strip(" ,;")
    return cleaned or None


def parse_rule_based(text: str) -> ParsedCitation:
    authors = title = url = doi = arxiv_id = None
    year = None

    link = _split_link(text)
    if link is not None:
        body, url = link
        url = url or None
        m = _first_year(body)
        if m:
            year = int(m.group(1))
            authors = _clean_or_none(body[:m.start()])
            title = _clean_or_none(body[m.end():])
        else:
            title = _clean_or_none(body)
    else:
        m = _first_year(text)
        if m:
            year = int(m.group(1))
        um = _URL_TOKEN.search(text)
        if um:
            url = um.group(0).rstrip(".,;)")

    if url:
        arxiv_id = extract_arxiv_id(url)
        doi = extract_doi(url)
    if arxiv_id is None:
        m = _ARXIV_TEXT.search(text)
        if m:
            arxiv_id = m.group(1)
    if doi is None and link is None:
        doi = extract_doi(text)

    method = ParseMethod.RULE_BASED if any((title, url, doi, arxiv_id)) else ParseMethod.FAILED
    return ParsedCitation(authors=authors, year=year, title=title, url=url, doi=doi,
                          arxiv_id=arxiv_id, parse_method=method)


def parse_with_fallback(text: str, fb: Optional[FallbackParser] = None) -> ParsedCitation:
    """Rules first; the fallback runs only when no title or identifier was found."""
    parsed = parse_rule_based(text)
    if parsed.has_core_field or fb is None:
        return parsed
    try:
        result = fb.parse(text)
    except Exception:
        log.warning("fallback parser raised; treating as failed parse", exc_info=True)
        result = None
    if result is None or not result.has_core_field:
        return parsed
    return replace(result, parse_method=ParseMethod.LLM_FALLBACK)


class ScriptedFallbackParser:
    """Test double: returns canned fields per input text and counts calls."""

    def __init__(self, responses: Optional[dict] = None, fail: bool = False):
        self.responses = dict(responses or {})
        self.fail = fail
        self.calls = 0

    def parse(self, text: str) -> Optional[ParsedCitation]:
        self.calls += 1
        if self.fail:
            raise RuntimeError("scripted fallback failure")
        fields = self.responses.get(text)
        if fields is None:
            return None
        return ParsedCitation(**fields, parse_method=ParseMethod.LLM_FALLBACK)
