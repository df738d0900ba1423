"""Verifier scoring and the reviewer pass for suspicious identifier matches.

A judge backend is anything with ``judge(prompt, schema_tag, fields) -> dict``.
Hosted models read ``prompt``; the in-tree rule-based judge reads the
structured ``fields`` instead. Backends may raise; :func:`verify` and
:func:`review` contain every failure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Protocol

from . import prompts
from .labeling import representative_score
from .models import Label, MatchMethod, MatchResult, ParsedCitation, RawCitation, Thresholds
from .textsim import normalize_for_compare, title_similarity

log = logging.getLogger(__name__)

CLASSIFICATIONS = ("exact_match", "minor_hallucination", "major_hallucination")
CONFIDENCES = ("low", "medium", "high")
_CLASS_TO_LABEL = dict(zip(CLASSIFICATIONS, (Label.EXACT, Label.MINOR, Label.MAJOR)))
_LABEL_TO_CLASS = {v: k for k, v in _CLASS_TO_LABEL.items()}


class JudgeBackend(Protocol):
    def judge(self, prompt: str, schema_tag: str, fields: dict) -> dict:
        ...


class VerificationError(Exception):
    def __init__(self, message: str, raw_output=None):
        super().__init__(message)
        self.raw_output = raw_output


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class VerifierVerdict:
    score: float
    classification: str
    confidence: str
    reasoning: str
    key_differences: tuple = ()
    clamped: bool = False

    def __post_init__(self):
        if not 0.0 <= self.score <= 10.0:
            raise ValueError(f"score out of range: {self.score}")


@dataclass(frozen=True)
class ReviewOutcome:
    final_label: Label
    final_score: float
    reviewer_reasoning: str
    overrode: bool
    error: Optional[str] = None


def classification_label(classification: str) -> Label:
    return _CLASS_TO_LABEL[classification]


def _na(value) -> str:
    return "N/A" if value is None or value == "" else str(value)


def format_similarity(sim: float) -> str:
    text = f"{sim:.1f}"
    return text[:-2] if text.endswith(".0") else text


def matched_info(cand) -> str:
    rows = [("Title", cand.title), ("Authors", cand.authors), ("Year", cand.year),
            ("Venue", cand.venue), ("ArXiv ID", cand.arxiv_id), ("DOI", cand.doi),
            ("URL", cand.url), ("Source", cand.source.value)]
    return "\n".join(f"- {k}: {_na(v)}" for k, v in rows)


def _require_candidate(match: MatchResult) -> None:
    if match.match_method is MatchMethod.NOT_FOUND or match.candidate is None:
        raise ValueError("the verifier needs a retrieved candidate")


def render_verifier_prompt(parsed: ParsedCitation, raw: RawCitation, match: MatchResult) -> str:
    _require_candidate(match)
    return prompts.load("verifier").format(
        citation_authors=_na(parsed.authors),
        citation_year=_na(parsed.year),
        citation_title=_na(parsed.title),
        citation_arxiv_id=_na(parsed.arxiv_id),
        citation_url=_na(parsed.url),
        match_method=match.match_method.value,
        similarity_score=format_similarity(match.title_similarity),
        matched_info=matched_info(match.candidate),
        context=f"Raw citation text: {raw.text}",
    )


def render_reviewer_prompt(raw_text: str, parsed: ParsedCitation, match: MatchResult,
                           first: VerifierVerdict, first_label: Label) -> str:
    _require_candidate(match)
    cand = match.candidate
    return prompts.load("reviewer").format(
        citation_raw_text=raw_text,
        citation_authors=_na(parsed.authors),
        citation_year=_na(parsed.year),
        citation_title=_na(parsed.title),
        match_source=cand.source.value,
        source_authors=_na(cand.authors),
        source_year=_na(cand.year),
        source_title=_na(cand.title),
        title_similarity=format_similarity(match.title_similarity),
        verifier_label=_LABEL_TO_CLASS[first_label],
        verifier_score=format_similarity(first.score),
        verifier_reasoning=first.reasoning,
    )


def judge_fields(parsed: ParsedCitation, raw_text: str, match: MatchResult) -> dict:
    return {
        "citation": {**parsed.to_dict(), "raw_text": raw_text},
        "candidate": match.candidate.to_dict(),
        "match_method": match.match_method.value,
        "title_similarity": match.title_similarity,
    }


def validate_verdict(out) -> VerifierVerdict:
    if not isinstance(out, dict):
        raise SchemaError("verdict is not an object")
    missing = [k for k in ("score", "classification", "confidence", "reasoning",
                           "key_differences") if k not in out]
    if missing:
        raise SchemaError(f"verdict lacks fields: {missing}")
    score = out["score"]
    if isinstance(score, bool) or not isinstance(score, (int, float)) or score != score:
        raise SchemaError(f"score is not a number: {score!r}")
    if out["classification"] not in CLASSIFICATIONS:
        raise SchemaError(f"bad classification: {out['classification']!r}")
    if out["confidence"] not in CONFIDENCES:
        raise SchemaError(f"bad confidence: {out['confidence']!r}")
    if not isinstance(out["reasoning"], str):
        raise SchemaError("reasoning is not a string")
    diffs = out["key_differences"]
    if not isinstance(diffs, list) or not all(isinstance(d, str) for d in diffs):
        raise SchemaError("key_differences is not a list of strings")
    clamped = not 0.0 <= score <= 10.0
    if clamped:
        log.warning("verifier score %r outside [0, 10]; clamping", score)
    return VerifierVerdict(
        score=float(min(10.0, max(0.0, score))),
        classification=out["classification"],
        confidence=out["confidence"],
        reasoning=out["reasoning"],
        key_differences=tuple(diffs),
        clamped=clamped,
    )


def _judge_with_retry(backend, prompt, tag, fields, validate, retries):
    last_output, last_error = None, None
    for _ in range(retries + 1):
        try:
            last_output = backend.judge(prompt, tag, fields)
            return validate(last_output)
        except Exception as exc:  # noqa: BLE001 - judge failures are contained here
            last_error = exc
            log.warning("%s judge attempt failed: %s", tag, exc)
    raise VerificationError(f"{tag} judge failed: {last_error}", last_output)


def verify(parsed: ParsedCitation, raw: RawCitation, match: MatchResult, backend: JudgeBackend,
           retries: int = 1) -> VerifierVerdict:
    prompt = render_verifier_prompt(parsed, raw, match)
    return _judge_with_retry(backend, prompt, "verifier", judge_fields(parsed, raw.text, match),
                             validate_verdict, retries)


def is_suspicious(match: MatchResult, gate: float = 70.0) -> bool:
    if match.candidate is None:
        return False
    return (match.match_method in (MatchMethod.ARXIV_ID_LOOKUP, MatchMethod.WEB_SEARCH)
            and match.title_similarity < gate)


def _validate_review(out) -> tuple:
    if not isinstance(out, dict):
        raise SchemaError("review is not an object")
    cls = out.get("classification")
    if cls not in CLASSIFICATIONS:
        raise SchemaError(f"bad classification: {cls!r}")
    reasoning = out.get("reasoning")
    if not isinstance(reasoning, str):
        raise SchemaError("reasoning is not a string")
    return classification_label(cls), reasoning


def review(raw_text: str, parsed: ParsedCitation, match: MatchResult, first: VerifierVerdict,
           first_label: Label, backend: JudgeBackend, thresholds: Thresholds,
           retries: int = 1) -> ReviewOutcome:
    prompt = render_reviewer_prompt(raw_text, parsed, match, first, first_label)
    fields = judge_fields(parsed, raw_text, match)
    fields["first_pass"] = {"label": first_label.value, "score": first.score,
                            "reasoning": first.reasoning}
    try:
        label, reasoning = _judge_with_retry(backend, prompt, "reviewer", fields,
                                             _validate_review, retries)
    except VerificationError as exc:
        return ReviewOutcome(first_label, first.score, "", overrode=False, error=str(exc))
    if label is first_label:
        return ReviewOutcome(first_label, first.score, reasoning, overrode=False)
    return ReviewOutcome(label, representative_score(label, thresholds), reasoning, overrode=True)


_AUTHOR_STOP = {"et", "al", "and"}


def surname_tokens(authors: Optional[str]) -> frozenset:
    if not authors:
        return frozenset()
    return frozenset(t for t in normalize_for_compare(authors).split()
                     if len(t) > 1 and t not in _AUTHOR_STOP)


def author_agreement(cited: Optional[str], found: Optional[str]) -> Optional[str]:
    """``None`` when not comparable, else one of ``same``, ``partial``, ``disjoint``."""
    a, b = surname_tokens(cited), surname_tokens(found)
    if not a or not b:
        return None
    if a <= b:
        return "same"
    return "partial" if a & b else "disjoint"


@dataclass
class RuleBasedJudge:
    """Deterministic offline judge scoring field agreement.

    Verifier score: title similarity / 10, minus a penalty per mismatched
    field. When an identifier matches, the score is floored at
    ``identifier_floor``: like a hosted verifier, it trusts identifiers,
    which is what the reviewer pass exists to catch.
    """

    year_near_penalty: float = 3.0
    year_far_penalty: float = 5.0
    near_year_window: int = 2
    author_partial_penalty: float = 3.0
    author_disjoint_penalty: float = 5.0
    identifier_penalty: float = 3.0
    identifier_floor: float = 5.0
    review_major_below: float = 50.0
    review_exact_from: float = 90.0

    def judge(self, prompt: str, schema_tag: str, fields: dict) -> dict:
        if schema_tag == "verifier":
            return self._verify(fields)
        if schema_tag == "reviewer":
            return self._review(fields)
        raise ValueError(f"unknown schema tag: {schema_tag!r}")

    def _differences(self, cit: dict, cand: dict):
        diffs, penalty = [], 0.0
        if cit.get("year") is not None and cand.get("year") is not None:
            gap = abs(cit["year"] - cand["year"])
            if gap:
                near = gap <= self.near_year_window
                penalty += self.year_near_penalty if near else self.year_far_penalty
                diffs.append(f"year {cit['year']} vs {cand['year']}")
        authors = author_agreement(cit.get("authors"), cand.get("authors"))
        if authors == "partial":
            penalty += self.author_partial_penalty
            diffs.append("author names partly differ")
        elif authors == "disjoint":
            penalty += self.author_disjoint_penalty
            diffs.append("author names differ")
        id_match = False
        for key, label in (("arxiv_id", "arXiv id"), ("doi", "DOI")):
            mine, theirs = cit.get(key), cand.get(key)
            if mine and theirs:
                if mine.lower() == theirs.lower():
                    id_match = True
                else:
                    penalty += self.identifier_penalty
                    diffs.append(f"{label} {mine} vs {theirs}")
                    break
        return diffs, penalty, id_match, authors

    def _verify(self, fields: dict) -> dict:
        cit, cand = fields["citation"], fields["candidate"]
        cited_title = cit.get("title") or cit.get("raw_text") or ""
        sim = title_similarity(cited_title, cand["title"])
        diffs, penalty, id_match, _ = self._differences(cit, cand)
        if sim < 100.0:
            diffs.insert(0, f"title similarity {format_similarity(sim)}")
        score = sim / 10.0 - penalty
        if id_match:
            score = max(score, self.identifier_floor)
        score = round(min(10.0, max(0.0, score)), 2)
        if score >= 8.0:
            cls = "exact_match"
        elif score >= 4.0:
            cls = "minor_hallucination"
        else:
            cls = "major_hallucination"
        reasoning = "; ".join(diffs) if diffs else "all compared fields agree"
        return {"score": score, "classification": cls,
                "confidence": "high" if not diffs else "medium",
                "reasoning": reasoning, "key_differences": diffs}

    def _review(self, fields: dict) -> dict:
        cit, cand = fields["citation"], fields["candidate"]
        sim = fields["title_similarity"]
        diffs, _, _, authors = self._differences(cit, cand)
        if sim < self.review_major_below or authors == "disjoint":
            cls = "major_hallucination"
            why = "citation text describes a different paper than the identifier resolves to"
        elif sim < self.review_exact_from or diffs:
            cls = "minor_hallucination"
            why = "same paper with metadata errors"
        else:
            cls = "exact_match"
            why = "citation text matches the source"
        return {"classification": cls, "reasoning": why}


class ScriptedJudge:
    """Returns queued outputs in order; raises queued exceptions. Counts calls per tag."""

    def __init__(self, verifier_outputs=(), reviewer_outputs=()):
        self.queues = {"verifier": list(verifier_outputs), "reviewer": list(reviewer_outputs)}
        self.calls = {"verifier": 0, "reviewer": 0}
        self.prompts = []

    def judge(self, prompt, schema_tag, fields):
        self.calls[schema_tag] += 1
        self.prompts.append((schema_tag, prompt))
        queue = self.queues[schema_tag]
        out = queue.pop(0) if len(queue) > 1 else queue[0]
        if isinstance(out, Exception):
            raise out
        return out
