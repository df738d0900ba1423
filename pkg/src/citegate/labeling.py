"""Score-to-label mapping and the threshold grid search.

Weighted F1 is computed in exact rational arithmetic during the sweep so that
plateaus of equally good threshold pairs compare equal and the tie-break
(smallest tau_m, then smallest tau_e) is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .models import LABELS, Label, Thresholds, label_for_score

__all__ = ["ScoredExample", "Thresholds", "assign_label", "best_pair", "calibrate", "grid_values",
           "representative_score", "support_weighted_f1", "sweep_thresholds"]

DEFAULT_THRESHOLDS = Thresholds(1.25, 7.25)


@dataclass(frozen=True)
class ScoredExample:
    score: float
    gold: Label

    def __post_init__(self):
        if not 0.0 <= self.score <= 10.0:
            raise ValueError(f"score out of range: {self.score}")


def assign_label(score: float, t: Thresholds) -> Label:
    if not 0.0 <= score <= 10.0:
        raise ValueError(f"score out of range: {score}")
    return label_for_score(score, t)


def representative_score(label: Label, t: Thresholds) -> float:
    """Midpoint of the score interval that ``label`` occupies under ``t``."""
    if label is Label.EXACT:
        return (t.tau_e + 10.0) / 2.0
    if label is Label.MINOR:
        return (t.tau_m + t.tau_e) / 2.0
    return t.tau_m / 2.0


def _weighted_f1_exact(preds: Sequence[Label], gold: Sequence[Label]) -> Fraction:
    n = len(gold)
    total = Fraction(0)
    for c in LABELS:
        tp = sum(1 for p, g in zip(preds, gold) if p is c and g is c)
        fp = sum(1 for p, g in zip(preds, gold) if p is c and g is not c)
        fn = sum(1 for p, g in zip(preds, gold) if p is not c and g is c)
        support = tp + fn
        denom = 2 * tp + fp + fn
        if support and denom:
            total += Fraction(support, n) * Fraction(2 * tp, denom)
    return total


def support_weighted_f1(preds: Sequence[Label], gold: Sequence[Label]) -> float:
    if len(preds) != len(gold):
        raise ValueError("preds and gold differ in length")
    if not gold:
        raise ValueError("need at least one example")
    return float(_weighted_f1_exact(preds, gold))


def grid_values(step: float) -> list:
    steps = 10.0 / step
    n = round(steps)
    if step <= 0 or abs(steps - n) > 1e-9:
        raise ValueError(f"step {step} does not divide 10 evenly")
    return [i * 10.0 / n for i in range(n + 1)]


def sweep_thresholds(dev: Sequence[ScoredExample], step: float = 0.25) -> list:
    """Weighted F1 for every grid pair with tau_e >= tau_m.

    Returns ``(tau_m, tau_e, Fraction f1)`` tuples in grid order.
    """
    if not dev:
        raise ValueError("dev set is empty")
    grid = grid_values(step)
    scores = np.array([ex.score for ex in dev], dtype=float)
    gold_idx = np.array([LABELS.index(ex.gold) for ex in dev])
    n = len(dev)
    support = [int((gold_idx == k).sum()) for k in range(3)]
    out = []
    for i, tau_m in enumerate(grid):
        for tau_e in grid[i:]:
            # 0 = exact, 1 = minor, 2 = major, matching LABELS
            pred_idx = np.where(scores >= tau_e, 0, np.where(scores >= tau_m, 1, 2))
            f1 = Fraction(0)
            for k in range(3):
                if not support[k]:
                    continue
                tp = int(((pred_idx == k) & (gold_idx == k)).sum())
                predicted = int((pred_idx == k).sum())
                denom = predicted + support[k]
                f1 += Fraction(support[k], n) * Fraction(2 * tp, denom)
            out.append((tau_m, tau_e, f1))
    return out


def best_pair(sweep: Sequence[tuple]) -> tuple:
    """First ``(tau_m, tau_e, f1)`` with the maximal f1; grid order encodes the tie-break."""
    best = None
    for row in sweep:
        if best is None or row[2] > best[2]:
            best = row
    if best is None:
        raise ValueError("empty sweep")
    return best


def calibrate(dev: Sequence[ScoredExample], step: float = 0.25) -> Thresholds:
    tau_m, tau_e, _ = best_pair(sweep_thresholds(dev, step))
    return Thresholds(tau_m, tau_e)


def calibrate_with_score(dev: Sequence[ScoredExample], step: float = 0.25):
    t = calibrate(dev, step)
    preds = [assign_label(ex.score, t) for ex in dev]
    return t, support_weighted_f1(preds, [ex.gold for ex in dev])
