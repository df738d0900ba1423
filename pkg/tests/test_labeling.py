import random
import time

import pytest
from hypothesis import given, strategies as st

import oracles
from citegate.labeling import (ScoredExample, assign_label, best_pair, calibrate,
                               calibrate_with_score, grid_values, representative_score,
                               support_weighted_f1, sweep_thresholds)
from citegate.models import Label, Thresholds

T = Thresholds()


def test_piecewise_mapping_on_a_dense_grid():
    for i in range(1001):
        s = i / 100
        assert assign_label(s, T).value == oracles.piecewise_label(s, 1.25, 7.25)


@pytest.mark.parametrize("score,label", [
    (0.0, Label.MAJOR), (1.2499, Label.MAJOR), (1.25, Label.MINOR), (7.2499, Label.MINOR),
    (7.25, Label.EXACT), (10.0, Label.EXACT)])
def test_boundaries_are_closed_below(score, label):
    assert assign_label(score, T) is label


def test_degenerate_thresholds():
    # tau_m == 0 means nothing is major; tau_m == tau_e removes the minor band
    assert assign_label(0.0, Thresholds(0.0, 5.0)) is Label.MINOR
    assert assign_label(4.99, Thresholds(5.0, 5.0)) is Label.MAJOR
    assert assign_label(5.0, Thresholds(5.0, 5.0)) is Label.EXACT


@pytest.mark.parametrize("score", [-0.01, 10.01])
def test_assign_label_rejects_out_of_range(score):
    with pytest.raises(ValueError):
        assign_label(score, T)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 10))
def test_mapping_monotone(a, b, m):
    t = Thresholds(m, max(m, 7.25))
    lo, hi = sorted((a, b))
    assert assign_label(lo, t).severity <= assign_label(hi, t).severity


def test_representative_scores():
    assert representative_score(Label.EXACT, T) == 8.625
    assert representative_score(Label.MINOR, T) == 4.25
    assert representative_score(Label.MAJOR, T) == 0.625
    for label in Label:
        assert assign_label(representative_score(label, T), T) is label


def test_grid():
    g = grid_values(0.25)
    assert len(g) == 41 and g[0] == 0.0 and g[-1] == 10.0 and g[5] == 1.25
    with pytest.raises(ValueError):
        grid_values(0.3)


def _random_dev(rng, n=200):
    dev = []
    for _ in range(n):
        gold = rng.choice(list(Label))
        centre = {Label.EXACT: 8.5, Label.MINOR: 5.0, Label.MAJOR: 1.5}[gold]
        dev.append(ScoredExample(min(10.0, max(0.0, round(rng.gauss(centre, 2.0), 2))), gold))
    return dev


def test_weighted_f1_against_oracle():
    rng = random.Random(3)
    for _ in range(50):
        gold = [rng.choice(list(Label)) for _ in range(30)]
        preds = [rng.choice(list(Label)) for _ in range(30)]
        assert support_weighted_f1(preds, gold) == float(oracles.weighted_f1(
            [p.value for p in preds], [g.value for g in gold]))


def test_calibration_matches_exhaustive_oracle_on_random_dev_sets():
    rng = random.Random(2024)
    for _ in range(50):
        dev = _random_dev(rng)
        start = time.perf_counter()
        sweep = sweep_thresholds(dev)
        tau_m, tau_e, f1 = best_pair(sweep)
        assert time.perf_counter() - start < 1.0
        assert len(sweep) == 861
        m, e, of1, npairs = oracles.exhaustive_calibrate(
            [ex.score for ex in dev], [ex.gold.value for ex in dev])
        assert (tau_m, tau_e, f1) == (m, e, of1)
        assert npairs == 861


def test_tie_break_prefers_smallest_pair():
    # perfectly separable: every pair on the optimal plateau achieves F1 = 1
    dev = [ScoredExample(9.0, Label.EXACT), ScoredExample(5.0, Label.MINOR),
           ScoredExample(1.0, Label.MAJOR)]
    t, f1 = calibrate_with_score(dev)
    assert f1 == 1.0
    assert t == Thresholds(1.25, 5.25)


def test_single_class_dev_set():
    dev = [ScoredExample(3.0, Label.MINOR)] * 4
    assert calibrate(dev) == Thresholds(0.0, 3.25)


def test_empty_inputs_rejected():
    with pytest.raises(ValueError):
        sweep_thresholds([])
    with pytest.raises(ValueError):
        best_pair([])
    with pytest.raises(ValueError):
        support_weighted_f1([], [])
    with pytest.raises(ValueError):
        ScoredExample(11.0, Label.EXACT)
