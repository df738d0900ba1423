import json
from dataclasses import replace

import pytest

from citegate.cache import CachedClient, RetrievalCache
from citegate.config import PipelineConfig
from citegate.evaluation import compute_metrics
from citegate.models import Label, MatchMethod, RawCitation, Source
from citegate.parser import ScriptedFallbackParser
from citegate.pipeline import (PipelineOutput, is_diagnostic, run_batch, run_one, run_pipeline,
                               verdict_row)
from citegate.sources import ScriptedBackend
from citegate.verification import RuleBasedJudge, ScriptedJudge

CFG = PipelineConfig(workers=1)


class CountingJudge(RuleBasedJudge):
    def __init__(self):
        super().__init__()
        self.seen = {"verifier": [], "reviewer": []}

    def judge(self, prompt, schema_tag, fields):
        self.seen[schema_tag].append(fields["citation"]["raw_text"])
        return super().judge(prompt, schema_tag, fields)


def _run(golden, cfg=CFG, judge=None):
    cases, fixtures = golden
    backend = ScriptedBackend(fixtures)
    cites = [RawCitation(c.id, "golden", c.text) for c in cases]
    outs = run_batch(cites, cfg, backend.clients(), judge or RuleBasedJudge(), clock=backend.clock)
    return outs, backend


def _by_kind(golden, kind):
    return {c.id for c in golden[0] if c.kind == kind}


def test_golden_set_is_labeled_perfectly(golden):
    outs, _ = _run(golden)
    report = compute_metrics([o.verdict.label for o in outs], [c.gold for c in golden[0]])
    assert report.accuracy == 1.0 and report.macro_f1 == 1.0
    assert not any(o.has_diagnostics for o in outs)
    assert [o.verdict.citation_id for o in outs] == [c.id for c in golden[0]]


def test_runs_are_byte_identical(golden):
    dumps = []
    for workers in (1, 4):
        outs, _ = _run(golden, replace(CFG, workers=workers))
        dumps.append(json.dumps([verdict_row(o.verdict) for o in outs], sort_keys=True))
    assert dumps[0] == dumps[1]


def test_reviewer_runs_exactly_on_suspicious_matches(golden):
    judge = CountingJudge()
    outs, _ = _run(golden, judge=judge)
    reviewed = {o.verdict.citation_id for o in outs if o.verdict.reviewer_applied}
    assert reviewed == _by_kind(golden, "identifier_mismatch")
    assert len(judge.seen["reviewer"]) == len(reviewed)
    overridden = [o.verdict for o in outs if o.verdict.reviewer_overrode]
    assert {v.citation_id for v in overridden} == reviewed
    assert all(v.first_pass_label is Label.MINOR and v.score == 0.625 for v in overridden)
    assert all("| reviewer:" in v.reasoning for v in overridden)


def test_verifier_never_sees_not_found(golden):
    judge = CountingJudge()
    outs, _ = _run(golden, judge=judge)
    not_found = [o for o in outs if o.verdict.match.match_method is MatchMethod.NOT_FOUND]
    assert {o.verdict.citation_id for o in not_found} == _by_kind(golden, "fabricated")
    assert len(judge.seen["verifier"]) == 60 - len(not_found)
    for o in not_found:
        assert (o.verdict.label, o.verdict.score) == (Label.MAJOR, 0.0)


def test_ablation_without_reviewer(golden):
    outs, _ = _run(golden, replace(CFG, enable_reviewer=False))
    mism = _by_kind(golden, "identifier_mismatch")
    for o in outs:
        if o.verdict.citation_id in mism:
            assert (o.verdict.label, o.verdict.score) == (Label.MINOR, 5.0)
            assert not o.verdict.reviewer_applied


def test_ablation_without_web_search(golden):
    cfg = replace(CFG, cascade=replace(CFG.cascade, enable_web_search=False))
    outs, backend = _run(golden, cfg)
    web_only = {c.id for c in golden[0] if c.stage == "web_search"}
    for o in outs:
        if o.verdict.citation_id in web_only:
            assert o.verdict.label is Label.MAJOR
            assert o.verdict.match.match_method is MatchMethod.NOT_FOUND
    assert backend.calls(Source.WEB_SEARCH) == []


def test_year_only_change_scores_as_hand_computed(golden):
    outs, _ = _run(golden)
    v = next(o.verdict for o in outs if o.verdict.citation_id == "g23")
    # identical title and authors, DOI agrees, year off by one: 10 - 3
    assert v.score == 7.0 and v.label is Label.MINOR
    assert v.match.match_method is MatchMethod.TITLE_SEARCH
    assert any("year" in d for d in v.key_differences)


def test_all_sources_failing():
    fx = {s: {"*": {"error": "timeout"}} for s in
          ("arxiv", "crossref", "semantic_scholar", "openalex", "web_search")}
    backend = ScriptedBackend(fx)
    raw = RawCitation("x", "c", "[Doe, J., 2001, Some Paper](https://arxiv.org/abs/0804.0389)")
    out = run_one(raw, CFG, backend.clients(), RuleBasedJudge(), clock=backend.clock)
    assert (out.verdict.label, out.verdict.score) == (Label.MAJOR, 0.0)
    assert out.has_diagnostics
    assert [f for f in out.verdict.flags if is_diagnostic(f)] == [
        f"source_error:{s}:timeout" for s in fx]


def test_verifier_failure_is_contained():
    backend = ScriptedBackend({"crossref": {"*": [{"title": "Some Paper", "authors": "J. Doe",
                                                   "year": 2001}]}})
    raw = RawCitation("x", "c", "[Doe, J., 2001, Some Paper](https://example.org/p)")
    judge = ScriptedJudge([RuntimeError("down")])
    out = run_one(raw, CFG, backend.clients(), judge, clock=backend.clock)
    assert (out.verdict.label, out.verdict.score) == (Label.MAJOR, 0.0)
    assert "verifier_error" in out.verdict.flags and out.has_diagnostics
    assert judge.calls["verifier"] == 2


def test_reviewer_failure_keeps_first_pass():
    backend = ScriptedBackend({"arxiv": {"0804.0389": {"title": "Unrelated Clock Paper",
                                                       "authors": "J. Doe", "year": 2001}}})
    raw = RawCitation("x", "c", "[Doe, J., 2001, Some Paper](https://arxiv.org/abs/0804.0389)")
    judge = ScriptedJudge([{"score": 6.0, "classification": "minor_hallucination",
                            "confidence": "low", "reasoning": "r", "key_differences": []}],
                          [RuntimeError("down")])
    v = run_pipeline(raw, CFG, backend.clients(), judge, clock=backend.clock)
    assert (v.label, v.score, v.reviewer_applied, v.reviewer_overrode) == (
        Label.MINOR, 6.0, True, False)
    assert "reviewer_error" in v.flags


def test_clamped_score_flag():
    backend = ScriptedBackend({"crossref": {"*": [{"title": "Some Paper", "authors": "J. Doe",
                                                   "year": 2001}]}})
    raw = RawCitation("x", "c", "[Doe, J., 2001, Some Paper](https://example.org/p)")
    judge = ScriptedJudge([{"score": 14, "classification": "exact_match", "confidence": "high",
                            "reasoning": "r", "key_differences": []}])
    v = run_pipeline(raw, CFG, backend.clients(), judge, clock=backend.clock)
    assert v.score == 10.0 and "score_clamped" in v.flags
    assert not is_diagnostic("score_clamped")


def test_parse_failure_and_fallback_parser():
    backend = ScriptedBackend({"crossref": {"*": [{"title": "Recovered Title", "authors": "Smith",
                                                   "year": 1999}]}})
    raw = RawCitation("x", "c", "Smith and Jones 1999")
    plain = run_one(raw, CFG, backend.clients(), RuleBasedJudge(), clock=backend.clock)
    assert "parse_failed" in plain.verdict.flags
    fb = ScriptedFallbackParser({raw.text: {"authors": "Smith", "year": 1999,
                                            "title": "Recovered Title"}})
    rescued = run_one(raw, CFG, backend.clients(), RuleBasedJudge(), fb, clock=backend.clock)
    assert "parse_failed" not in rescued.verdict.flags
    assert rescued.verdict.label is Label.EXACT


def test_cache_preserves_verdicts(golden, tmp_path):
    cases, fixtures = golden
    cites = [RawCitation(c.id, "golden", c.text) for c in cases]
    baseline, _ = _run(golden)
    cache = RetrievalCache(tmp_path)
    rows = []
    for _ in range(2):
        backend = ScriptedBackend(fixtures)
        clients = {s: CachedClient(c, cache) for s, c in backend.clients().items()}
        outs = run_batch(cites, CFG, clients, RuleBasedJudge(), clock=backend.clock)
        rows.append([(o.verdict.label, o.verdict.score) for o in outs])
    assert rows[0] == rows[1] == [(o.verdict.label, o.verdict.score) for o in baseline]
    assert cache.hits > 0
    # the second pass is served entirely from disk
    assert backend.call_log == []


def test_verdict_row_shape(golden):
    outs, _ = _run(golden)
    row = verdict_row(outs[0].verdict)
    assert list(row) == ["id", "label", "score", "reasoning", "key_differences", "match_method",
                         "matched_title", "matched_source", "title_similarity",
                         "reviewer_applied", "reviewer_overrode", "stage_timings_ms", "flags"]
    assert row["stage_timings_ms"]["arxiv"] == pytest.approx(310.0)
    assert row["stage_timings_ms"]["crossref"] is None
    audit = outs[0].audit_record()
    assert set(audit) == {"raw", "parsed", "verdict"}
    assert isinstance(outs[0], PipelineOutput)
