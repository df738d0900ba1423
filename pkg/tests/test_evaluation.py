import random

import pytest

import oracles
from citegate.evaluation import (LatencyRun, Summary, aggregate_latency, compute_metrics,
                                 nearest_rank)
from citegate.models import CASCADE_ORDER, Label, Source

E, M, J = Label.EXACT, Label.MINOR, Label.MAJOR


def test_perfect_predictions():
    gold = [E, M, J, E, M, J]
    r = compute_metrics(gold, gold)
    assert r.macro_f1 == 1.0 and r.accuracy == 1.0
    assert r.confusion == ((2, 0, 0), (0, 2, 0), (0, 0, 2))


def test_hand_computed_nine_examples():
    gold = [E, E, E, M, M, M, J, J, J]
    pred = [E, E, E, M, E, J, J, J, E]
    r = compute_metrics(pred, gold)
    # rows are gold, columns predicted
    assert r.confusion == ((3, 0, 0), (1, 1, 1), (1, 0, 2))
    assert r.per_class[E].precision == pytest.approx(3 / 5)
    assert r.per_class[E].f1 == pytest.approx(0.75)
    assert r.per_class[M].f1 == pytest.approx(0.5)
    assert r.per_class[J].f1 == pytest.approx(2 / 3)
    assert abs(r.macro_f1 - 23 / 36) < 1e-12
    assert r.accuracy == pytest.approx(6 / 9)
    assert [s.support for s in r.per_class.values()] == [3, 3, 3]


def test_absent_class_scores_zero():
    r = compute_metrics([E, E], [E, E])
    assert r.per_class[M].f1 == 0.0
    assert r.macro_f1 == pytest.approx(1 / 3)


def test_permutation_invariance():
    rng = random.Random(5)
    gold = [rng.choice(list(Label)) for _ in range(60)]
    pred = [rng.choice(list(Label)) for _ in range(60)]
    base = compute_metrics(pred, gold)
    pairs = list(zip(pred, gold))
    rng.shuffle(pairs)
    shuffled = compute_metrics([p for p, _ in pairs], [g for _, g in pairs])
    assert shuffled == base


def test_report_dict_and_table():
    r = compute_metrics([E, M, J], [E, M, M])
    d = r.to_dict()
    assert d["confusion"]["labels"] == ["exact", "minor", "major"]
    assert d["confusion"]["matrix"] == [[1, 0, 0], [0, 1, 1], [0, 0, 0]]
    assert "rows = gold" in r.format_table()


def test_metric_input_validation():
    with pytest.raises(ValueError):
        compute_metrics([E], [E, M])
    with pytest.raises(ValueError):
        compute_metrics([], [])


@pytest.mark.parametrize("pct,value", [(50, 3), (95, 5), (99, 5), (1, 1), (20, 1), (21, 2)])
def test_nearest_rank(pct, value):
    assert nearest_rank([5, 1, 4, 2, 3], pct) == value


def test_summary():
    s = Summary.of([1.0, 2.0, 3.0, 4.0])
    assert (s.mean, s.median, s.max, s.n) == (2.5, 2.0, 4.0, 4)
    assert s.std == pytest.approx(1.118033988749895)
    assert Summary.of([]) is None


def _run(err=False, gold=None, **stages):
    return LatencyRun({Source(k): v for k, v in stages.items()}, err, gold)


def test_conditional_latency_example():
    stats = aggregate_latency([_run(crossref=1.0, web_search=2.0), _run(crossref=1.0)])
    web = stats.stages[Source.WEB_SEARCH]
    assert (web.reach_rate, web.cond_mean, web.expected_contribution) == (0.5, 2.0, 1.0)
    assert stats.overall.mean == 2.0
    assert stats.structured_only.mean == 1.0


def test_unreached_stage():
    stats = aggregate_latency([_run(crossref=1.0)])
    arx = stats.stages[Source.ARXIV]
    assert arx.reach_rate == 0.0 and arx.cond_mean is None and arx.expected_contribution == 0.0


def test_errors_are_excluded():
    stats = aggregate_latency([_run(crossref=1.0), _run(err=True, crossref=50.0)])
    assert stats.n_runs == 1 and stats.n_excluded == 1
    assert stats.stages[Source.CROSSREF].cond_mean == 1.0


def test_empty_runs():
    stats = aggregate_latency([])
    assert stats.overall is None and stats.stages[Source.ARXIV].reach_rate == 0.0


def test_planted_runs_match_naive_oracle():
    rng = random.Random(99)
    runs, naive = [], []
    for _ in range(100):
        stages = {}
        depth = rng.randint(1, 5)
        for s in CASCADE_ORDER[:depth]:
            if s is Source.ARXIV and rng.random() < 0.5:
                stages[s] = None
            else:
                stages[s] = round(rng.uniform(0.05, 3.0), 3)
        err = rng.random() < 0.1
        gold = rng.choice(list(Label))
        runs.append(LatencyRun(stages, err, gold))
        naive.append(({s.value: v for s, v in stages.items()}, err))
    stats = aggregate_latency(runs)
    expected, totals = oracles.naive_latency(naive)
    for s in CASCADE_ORDER:
        got, want = stats.stages[s], expected[s.value]
        assert got.reach_rate == pytest.approx(want["reach"])
        assert got.cond_mean == pytest.approx(want["mean"])
        assert got.cond_median == want["p50"] and got.cond_p95 == want["p95"]
        assert got.expected_contribution == pytest.approx(want["contrib"])
    assert stats.overall.mean == pytest.approx(sum(totals) / len(totals))
    # the mean total decomposes into per-stage expected contributions
    assert stats.overall.mean == pytest.approx(
        sum(st.expected_contribution for st in stats.stages.values()))
    assert sum(x.n for x in stats.per_class.values()) == stats.n_runs
