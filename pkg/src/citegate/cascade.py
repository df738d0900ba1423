"""Waterfall candidate retrieval.

Stages run in a fixed order (arXiv-direct, CrossRef, Semantic Scholar,
OpenAlex, web search) and the first accepted candidate ends the walk.
Acceptance always uses title similarity; ranking scores only pick each
source's best hit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .models import (CASCADE_ORDER, MatchMethod, MatchResult, ParsedCitation, RawCitation,
                     Source, StageRecord)
from .sources.base import SourceError
from .textsim import SimilarityConfig, clean_text, ranking_score, title_similarity


@dataclass(frozen=True)
class CascadeConfig:
    enable_arxiv_direct: bool = True
    enable_web_search: bool = True
    min_title_similarity: float = 70.0
    crossref_confidence_gate: float = 75.0
    s2_confidence_bonus_cap: float = 5.0
    openalex_confidence_bonus_cap: float = 5.0
    arxiv_direct_confidence: float = 95.0
    per_stage_limit: int = 10
    web_search_limit: int = 5

    def __post_init__(self):
        for name in ("min_title_similarity", "crossref_confidence_gate", "s2_confidence_bonus_cap",
                     "openalex_confidence_bonus_cap", "arxiv_direct_confidence"):
            if not 0.0 <= getattr(self, name) <= 100.0:
                raise ValueError(f"{name} must be in [0, 100]")
        if self.per_stage_limit < 1 or self.web_search_limit < 1:
            raise ValueError("result limits must be >= 1")


def build_query(parsed: ParsedCitation, raw: RawCitation):
    """Return ``(query, year)``: the cleaned title if usable, else the cleaned raw text."""
    query = clean_text(parsed.title) if parsed.title else ""
    if not query:
        query = clean_text(raw.text) or raw.text.strip() or raw.text
    return query, parsed.year


class _Walk:
    """Mutable bookkeeping for one cascade run."""

    def __init__(self, clock):
        self.clock = clock
        self.records = {s: StageRecord(s) for s in CASCADE_ORDER}

    def call(self, stage: Source, fn):
        start = self.clock()
        out = fn()
        elapsed = self.clock() - start
        error = out.kind.value if isinstance(out, SourceError) else None
        self.records[stage] = StageRecord(stage, attempted=True, elapsed=elapsed, error=error)
        return None if error else out

    def mark(self, stage: Source, **changes) -> None:
        self.records[stage] = replace(self.records[stage], **changes)

    def result(self, cand=None, sim=0.0, method=MatchMethod.NOT_FOUND) -> MatchResult:
        stages = tuple(self.records[s] for s in CASCADE_ORDER)
        if cand is None:
            return MatchResult.not_found(stages)
        return MatchResult(cand, sim, method, stages)


def retrieve_best(parsed: ParsedCitation, raw: RawCitation, clients: dict,
                  cfg: CascadeConfig = CascadeConfig(),
                  sim_cfg: Optional[SimilarityConfig] = None,
                  clock: Callable[[], float] = time.perf_counter) -> MatchResult:
    sim_cfg = sim_cfg or SimilarityConfig(min_title_similarity=cfg.min_title_similarity)
    gate = cfg.min_title_similarity
    query, year = build_query(parsed, raw)
    walk = _Walk(clock)

    def sim_of(cand):
        return title_similarity(query, cand.title)

    incumbent = 0.0
    arxiv_held = None
    arxiv_client = clients.get(Source.ARXIV)
    if cfg.enable_arxiv_direct and parsed.arxiv_id and arxiv_client is not None:
        hit = walk.call(Source.ARXIV, lambda: arxiv_client.lookup_id(parsed.arxiv_id))
        if hit is not None:
            cand = replace(hit, confidence=cfg.arxiv_direct_confidence, arxiv_id=parsed.arxiv_id)
            sim = sim_of(cand)
            walk.mark(Source.ARXIV, best_similarity=sim)
            if sim >= gate:
                walk.mark(Source.ARXIV, accepted=True)
                return walk.result(cand, sim, MatchMethod.ARXIV_ID_LOOKUP)
            # low similarity on an identifier hit: keep it around for review
            arxiv_held = (cand, sim)
            incumbent = sim

    crossref_held = None
    client = clients.get(Source.CROSSREF)
    if client is not None:
        hits = walk.call(Source.CROSSREF,
                         lambda: client.search(query, year, cfg.per_stage_limit))
        if hits:
            best = max(hits, key=lambda c: ranking_score(query, year, c, "levenshtein", sim_cfg))
            sim = sim_of(best)
            cand = replace(best, confidence=sim)
            walk.mark(Source.CROSSREF, best_similarity=sim)
            if sim >= gate and cand.confidence >= cfg.crossref_confidence_gate:
                walk.mark(Source.CROSSREF, accepted=True)
                return walk.result(cand, sim, MatchMethod.TITLE_SEARCH)
            if sim >= gate:
                crossref_held = (cand, sim)
            incumbent = max(incumbent, sim)

    for stage, cap in ((Source.SEMANTIC_SCHOLAR, cfg.s2_confidence_bonus_cap),
                       (Source.OPENALEX, cfg.openalex_confidence_bonus_cap)):
        client = clients.get(stage)
        if client is None:
            continue
        hits = walk.call(stage, lambda: client.search(query, year, cfg.per_stage_limit))
        if not hits:
            continue
        best = max(hits, key=lambda c: ranking_score(query, year, c, "overlap", sim_cfg))
        sim = sim_of(best)
        walk.mark(stage, best_similarity=sim)
        if sim >= gate and sim > incumbent:
            walk.mark(stage, accepted=True)
            cand = replace(best, confidence=min(100.0, sim + cap))
            return walk.result(cand, sim, MatchMethod.TITLE_SEARCH)

    web_held = None
    client = clients.get(Source.WEB_SEARCH)
    if cfg.enable_web_search and client is not None:
        hits = walk.call(Source.WEB_SEARCH,
                         lambda: client.search(query, None, cfg.web_search_limit))
        if hits:
            best = max(hits, key=sim_of)
            sim = sim_of(best)
            cand = replace(best, confidence=sim)
            walk.mark(Source.WEB_SEARCH, best_similarity=sim)
            if sim >= gate:
                walk.mark(Source.WEB_SEARCH, accepted=True)
                return walk.result(cand, sim, MatchMethod.WEB_SEARCH)
            web_held = (cand, sim)

    if crossref_held is not None:
        walk.mark(Source.CROSSREF, fallback=True)
        return walk.result(*crossref_held, MatchMethod.TITLE_SEARCH)
    # between a low-similarity identifier hit and a sub-gate web hit, keep the
    # closer title; the earlier stage wins ties
    if arxiv_held is not None and (web_held is None or arxiv_held[1] >= web_held[1]):
        walk.mark(Source.ARXIV, fallback=True)
        return walk.result(*arxiv_held, MatchMethod.ARXIV_ID_LOOKUP)
    if web_held is not None:
        walk.mark(Source.WEB_SEARCH, fallback=True)
        return walk.result(*web_held, MatchMethod.WEB_SEARCH)
    return walk.result()
