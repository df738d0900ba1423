"""End-to-end wiring: parse, retrieve, verify, label, review.

Every failure inside a citation's run is turned into a defined verdict plus
flags; nothing propagates to the caller.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .cascade import retrieve_best
from .config import PipelineConfig
from .labeling import assign_label
from .models import LabeledVerdict, Label, MatchResult, ParsedCitation, ParseMethod, RawCitation
from .parser import FallbackParser, parse_with_fallback
from .verification import VerificationError, is_suspicious, review, verify

log = logging.getLogger(__name__)

# flags that mean something went wrong, as opposed to informational notes
DIAGNOSTIC_PREFIXES = ("source_error:", "verifier_error", "reviewer_error")


def is_diagnostic(flag: str) -> bool:
    return flag.startswith(DIAGNOSTIC_PREFIXES)


@dataclass(frozen=True)
class PipelineOutput:
    raw: RawCitation
    parsed: ParsedCitation
    verdict: LabeledVerdict

    @property
    def has_diagnostics(self) -> bool:
        return any(is_diagnostic(f) for f in self.verdict.flags)

    def audit_record(self) -> dict:
        return {"raw": self.raw.to_dict(), "parsed": self.parsed.to_dict(),
                "verdict": self.verdict.to_dict()}


def _match_flags(match: MatchResult) -> list:
    flags = []
    for rec in match.stage_records:
        if rec.error:
            flags.append(f"source_error:{rec.stage.value}:{rec.error}")
        if rec.fallback:
            flags.append("fallback_return")
    return flags


def run_one(raw: RawCitation, cfg: PipelineConfig, clients: dict, backend,
            fallback_parser: Optional[FallbackParser] = None,
            clock: Callable[[], float] = time.perf_counter) -> PipelineOutput:
    parsed = parse_with_fallback(raw.text, fallback_parser)
    flags = ["parse_failed"] if parsed.parse_method is ParseMethod.FAILED else []
    match = retrieve_best(parsed, raw, clients, cfg.cascade, cfg.similarity, clock=clock)
    flags += _match_flags(match)
    t = cfg.thresholds

    def verdict(label, score, reasoning="", diffs=(), applied=False, overrode=False,
                first_label=None, first_score=None):
        return PipelineOutput(raw, parsed, LabeledVerdict(
            raw.id, label, score, reasoning, tuple(diffs), applied, overrode, t, match,
            first_label, first_score, tuple(flags)))

    if match.candidate is None:
        return verdict(Label.MAJOR, 0.0, "no sufficiently similar publication was retrieved")
    try:
        first = verify(parsed, raw, match, backend, retries=cfg.verifier.retries)
    except VerificationError as exc:
        log.warning("verifier failed for %s: %s", raw.id, exc)
        flags.append("verifier_error")
        return verdict(Label.MAJOR, 0.0, f"verifier failed: {exc}")
    if first.clamped:
        flags.append("score_clamped")
    first_label = assign_label(first.score, t)
    if not (cfg.enable_reviewer and is_suspicious(match, cfg.suspicion_similarity_gate)):
        return verdict(first_label, first.score, first.reasoning, first.key_differences)
    outcome = review(raw.text, parsed, match, first, first_label, backend, t,
                     retries=cfg.verifier.retries)
    if outcome.error:
        flags.append("reviewer_error")
    reasoning = first.reasoning
    if outcome.reviewer_reasoning:
        reasoning = f"{first.reasoning} | reviewer: {outcome.reviewer_reasoning}"
    return verdict(outcome.final_label, outcome.final_score, reasoning, first.key_differences,
                   applied=True, overrode=outcome.overrode, first_label=first_label,
                   first_score=first.score)


def run_pipeline(raw: RawCitation, cfg: PipelineConfig, clients: dict, backend,
                 fallback_parser: Optional[FallbackParser] = None,
                 clock: Callable[[], float] = time.perf_counter) -> LabeledVerdict:
    return run_one(raw, cfg, clients, backend, fallback_parser, clock).verdict


def run_batch(citations: Sequence[RawCitation], cfg: PipelineConfig, clients: dict, backend,
              fallback_parser: Optional[FallbackParser] = None,
              clock: Callable[[], float] = time.perf_counter) -> list:
    """Run every citation on a bounded pool; results come back in input order."""
    def one(raw):
        return run_one(raw, cfg, clients, backend, fallback_parser, clock)

    if cfg.workers == 1:
        return [one(r) for r in citations]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, citations))


def _ms(seconds: float) -> float:
    return round(seconds * 1000.0, 3)


def verdict_row(v: LabeledVerdict) -> dict:
    cand = v.match.candidate
    return {
        "id": v.citation_id,
        "label": v.label.value,
        "score": v.score,
        "reasoning": v.reasoning,
        "key_differences": list(v.key_differences),
        "match_method": v.match.match_method.value,
        "matched_title": cand.title if cand else None,
        "matched_source": cand.source.value if cand else None,
        "title_similarity": v.match.title_similarity,
        "reviewer_applied": v.reviewer_applied,
        "reviewer_overrode": v.reviewer_overrode,
        "stage_timings_ms": {r.stage.value: _ms(r.elapsed) if r.attempted else None
                             for r in v.match.stage_records},
        "flags": list(v.flags),
    }
