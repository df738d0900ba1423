"""Shared domain records for the citation-verification pipeline.

All records are frozen dataclasses. Every record offers ``to_dict`` /
``from_dict`` for JSON serialization; enums serialize to their string values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

YEAR_MIN = 1500
YEAR_MAX = 2100

MODERN_ARXIV_RE = re.compile(r"^\d{4}\.\d{4,5}$")
LEGACY_ARXIV_RE = re.compile(r"^[a-z][a-z\-]*(?:\.[A-Z]{2})?/\d{7}$")


def is_arxiv_id(value: str) -> bool:
    return bool(MODERN_ARXIV_RE.match(value) or LEGACY_ARXIV_RE.match(value))


class Label(str, Enum):
    EXACT = "exact"
    MINOR = "minor"
    MAJOR = "major"

    @property
    def severity(self) -> int:
        """0 for the most severe label (major), 2 for exact."""
        return _SEVERITY[self]

    @classmethod
    def parse(cls, value: str) -> "Label":
        """Accept label spellings used by datasets and judges."""
        key = str(value).strip().lower()
        try:
            return _LABEL_ALIASES[key]
        except KeyError:
            raise ValueError(f"unknown label: {value!r}") from None


_SEVERITY = {Label.MAJOR: 0, Label.MINOR: 1, Label.EXACT: 2}
_LABEL_ALIASES = {
    "exact": Label.EXACT,
    "exact_match": Label.EXACT,
    "valid": Label.EXACT,
    "minor": Label.MINOR,
    "minor_hallucination": Label.MINOR,
    "major": Label.MAJOR,
    "major_hallucination": Label.MAJOR,
}

LABELS = (Label.EXACT, Label.MINOR, Label.MAJOR)


class ParseMethod(str, Enum):
    RULE_BASED = "rule_based"
    LLM_FALLBACK = "llm_fallback"
    FAILED = "failed"


class Source(str, Enum):
    ARXIV = "arxiv"
    CROSSREF = "crossref"
    SEMANTIC_SCHOLAR = "semantic_scholar"
    OPENALEX = "openalex"
    WEB_SEARCH = "web_search"


CASCADE_ORDER = (
    Source.ARXIV,
    Source.CROSSREF,
    Source.SEMANTIC_SCHOLAR,
    Source.OPENALEX,
    Source.WEB_SEARCH,
)


class MatchMethod(str, Enum):
    ARXIV_ID_LOOKUP = "arxiv_id_lookup"
    TITLE_SEARCH = "title_search"
    WEB_SEARCH = "web_search"
    NOT_FOUND = "not_found"


def _check_year(year: Optional[int]) -> None:
    if year is not None and not (YEAR_MIN <= year <= YEAR_MAX):
        raise ValueError(f"year out of range: {year}")


def _opt(d: dict, key: str) -> Any:
    return d.get(key)


@dataclass(frozen=True)
class RawCitation:
    id: str
    collection: str
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("citation text must be non-empty")

    def to_dict(self) -> dict:
        return {"id": self.id, "collection": self.collection, "text": self.text}

    @classmethod
    def from_dict(cls, d: dict) -> "RawCitation":
        return cls(id=str(d["id"]), collection=str(d.get("collection", "")), text=d["text"])


@dataclass(frozen=True)
class ParsedCitation:
    authors: Optional[str] = None
    year: Optional[int] = None
    title: Optional[str] = None
    url: Optional[str] = None
    doi: Optional[str] = None
    arxiv_id: Optional[str] = None
    parse_method: ParseMethod = ParseMethod.FAILED

    def __post_init__(self):
        _check_year(self.year)
        if self.arxiv_id is not None and not is_arxiv_id(self.arxiv_id):
            raise ValueError(f"malformed arXiv id: {self.arxiv_id!r}")
        if self.parse_method is not ParseMethod.FAILED and not self.has_core_field:
            raise ValueError("a successful parse needs a title or an identifier")

    @property
    def has_core_field(self) -> bool:
        return any((self.title, self.url, self.doi, self.arxiv_id))

    def to_dict(self) -> dict:
        return {
            "authors": self.authors,
            "year": self.year,
            "title": self.title,
            "url": self.url,
            "doi": self.doi,
            "arxiv_id": self.arxiv_id,
            "parse_method": self.parse_method.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParsedCitation":
        return cls(
            authors=_opt(d, "authors"),
            year=_opt(d, "year"),
            title=_opt(d, "title"),
            url=_opt(d, "url"),
            doi=_opt(d, "doi"),
            arxiv_id=_opt(d, "arxiv_id"),
            parse_method=ParseMethod(d.get("parse_method", "failed")),
        )


@dataclass(frozen=True)
class CandidatePublication:
    title: str
    authors: str
    source: Source
    year: Optional[int] = None
    venue: Optional[str] = None
    url: Optional[str] = None
    doi: Optional[str] = None
    arxiv_id: Optional[str] = None
    confidence: float = 0.0

    def __post_init__(self):
        if not self.title:
            raise ValueError("candidate title must be non-empty")
        if not 0.0 <= self.confidence <= 100.0:
            raise ValueError(f"confidence out of range: {self.confidence}")
        if not isinstance(self.source, Source):
            raise ValueError(f"unknown source: {self.source!r}")

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "authors": self.authors,
            "year": self.year,
            "venue": self.venue,
            "url": self.url,
            "doi": self.doi,
            "arxiv_id": self.arxiv_id,
            "source": self.source.value,
            "confidence": self.confidence,
        }

    @classmethod
    def from_dict(cls, d: dict, source: Optional[Source] = None) -> "CandidatePublication":
        return cls(
            title=d["title"],
            authors=d.get("authors") or "",
            year=_opt(d, "year"),
            venue=_opt(d, "venue"),
            url=_opt(d, "url"),
            doi=_opt(d, "doi"),
            arxiv_id=_opt(d, "arxiv_id"),
            source=source if source is not None else Source(d["source"]),
            confidence=float(d.get("confidence", 0.0)),
        )


@dataclass(frozen=True)
class StageRecord:
    """What one cascade stage did for one citation.

    ``elapsed`` is in seconds. ``error`` holds a SourceError kind when the
    source failed; ``fallback`` marks the stage whose candidate was returned
    without clearing the acceptance gates.
    """

    stage: Source
    attempted: bool = False
    accepted: bool = False
    best_similarity: Optional[float] = None
    elapsed: float = 0.0
    error: Optional[str] = None
    fallback: bool = False

    def to_dict(self) -> dict:
        return {
            "stage": self.stage.value,
            "attempted": self.attempted,
            "accepted": self.accepted,
            "best_similarity": self.best_similarity,
            "elapsed": self.elapsed,
            "error": self.error,
            "fallback": self.fallback,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StageRecord":
        return cls(
            stage=Source(d["stage"]),
            attempted=bool(d.get("attempted", False)),
            accepted=bool(d.get("accepted", False)),
            best_similarity=_opt(d, "best_similarity"),
            elapsed=float(d.get("elapsed", 0.0)),
            error=_opt(d, "error"),
            fallback=bool(d.get("fallback", False)),
        )


@dataclass(frozen=True)
class MatchResult:
    candidate: Optional[CandidatePublication]
    title_similarity: float
    match_method: MatchMethod
    stage_records: tuple = ()

    def __post_init__(self):
        if (self.candidate is None) != (self.match_method is MatchMethod.NOT_FOUND):
            raise ValueError("candidate must be absent iff match_method is not_found")
        if self.candidate is None and self.title_similarity != 0:
            raise ValueError("title_similarity must be 0 without a candidate")
        order = [CASCADE_ORDER.index(r.stage) for r in self.stage_records]
        if order != sorted(order):
            raise ValueError("stage records must follow cascade order")

    @classmethod
    def not_found(cls, stage_records=()) -> "MatchResult":
        return cls(None, 0.0, MatchMethod.NOT_FOUND, tuple(stage_records))

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate.to_dict() if self.candidate else None,
            "title_similarity": self.title_similarity,
            "match_method": self.match_method.value,
            "stage_records": [r.to_dict() for r in self.stage_records],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatchResult":
        cand = d.get("candidate")
        return cls(
            candidate=CandidatePublication.from_dict(cand) if cand else None,
            title_similarity=float(d["title_similarity"]),
            match_method=MatchMethod(d["match_method"]),
            stage_records=tuple(StageRecord.from_dict(r) for r in d.get("stage_records", [])),
        )


@dataclass(frozen=True)
class Thresholds:
    tau_m: float = 1.25
    tau_e: float = 7.25

    def __post_init__(self):
        for name in ("tau_m", "tau_e"):
            value = getattr(self, name)
            if not 0.0 <= value <= 10.0:
                raise ValueError(f"{name} out of range: {value}")
        if self.tau_m > self.tau_e:
            raise ValueError("tau_m must not exceed tau_e")

    def to_dict(self) -> dict:
        return {"tau_m": self.tau_m, "tau_e": self.tau_e}

    @classmethod
    def from_dict(cls, d: dict) -> "Thresholds":
        return cls(tau_m=float(d["tau_m"]), tau_e=float(d["tau_e"]))


def label_for_score(score: float, thresholds: Thresholds) -> Label:
    if score >= thresholds.tau_e:
        return Label.EXACT
    if score >= thresholds.tau_m:
        return Label.MINOR
    return Label.MAJOR


@dataclass(frozen=True)
class LabeledVerdict:
    """Final label for one citation plus everything needed to audit it.

    ``first_pass_label`` / ``first_pass_score`` keep the verifier's output
    when the reviewer overrides it.
    """

    citation_id: str
    label: Label
    score: float
    reasoning: str
    key_differences: tuple
    reviewer_applied: bool
    reviewer_overrode: bool
    thresholds: Thresholds
    match: MatchResult
    first_pass_label: Optional[Label] = None
    first_pass_score: Optional[float] = None
    flags: tuple = field(default=())

    def __post_init__(self):
        if not 0.0 <= self.score <= 10.0:
            raise ValueError(f"score out of range: {self.score}")
        if self.reviewer_overrode and not self.reviewer_applied:
            raise ValueError("reviewer cannot override without being applied")

    @property
    def consistent(self) -> bool:
        return label_for_score(self.score, self.thresholds) is self.label

    def to_dict(self) -> dict:
        return {
            "citation_id": self.citation_id,
            "label": self.label.value,
            "score": self.score,
            "reasoning": self.reasoning,
            "key_differences": list(self.key_differences),
            "reviewer_applied": self.reviewer_applied,
            "reviewer_overrode": self.reviewer_overrode,
            "thresholds": self.thresholds.to_dict(),
            "match": self.match.to_dict(),
            "first_pass_label": self.first_pass_label.value if self.first_pass_label else None,
            "first_pass_score": self.first_pass_score,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledVerdict":
        fpl = d.get("first_pass_label")
        return cls(
            citation_id=d["citation_id"],
            label=Label(d["label"]),
            score=float(d["score"]),
            reasoning=d["reasoning"],
            key_differences=tuple(d.get("key_differences", [])),
            reviewer_applied=bool(d["reviewer_applied"]),
            reviewer_overrode=bool(d["reviewer_overrode"]),
            thresholds=Thresholds.from_dict(d["thresholds"]),
            match=MatchResult.from_dict(d["match"]),
            first_pass_label=Label(fpl) if fpl else None,
            first_pass_score=d.get("first_pass_score"),
            flags=tuple(d.get("flags", [])),
        )
