"""Classification metrics and retrieval-latency aggregation.

Confusion matrices are indexed ``[gold][pred]`` in the order exact, minor,
major. Percentiles use the nearest-rank rule, including the median.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .models import CASCADE_ORDER, LABELS, Label, Source

CONFUSION_HEADER = "rows = gold label, columns = predicted label (exact, minor, major)"


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_class: dict
    macro_f1: float
    accuracy: float
    confusion: tuple
    n: int

    @property
    def per_class_f1(self) -> dict:
        return {label: s.f1 for label, s in self.per_class.items()}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class": {label.value: {"precision": s.precision, "recall": s.recall,
                                        "f1": s.f1, "support": s.support}
                          for label, s in self.per_class.items()},
            "confusion": {"orientation": CONFUSION_HEADER,
                          "labels": [label.value for label in LABELS],
                          "matrix": [list(row) for row in self.confusion]},
        }

    def table_rows(self) -> list:
        """Rows mirroring the results-table columns, as percentages."""
        f1 = self.per_class_f1
        return [("exact_f1", 100 * f1[Label.EXACT]), ("minor_f1", 100 * f1[Label.MINOR]),
                ("major_f1", 100 * f1[Label.MAJOR]), ("macro_f1", 100 * self.macro_f1),
                ("accuracy", 100 * self.accuracy)]

    def format_table(self) -> str:
        head = "Exact   Minor   Major   Macro   Acc."
        vals = "  ".join(f"{v:6.1f}" for _, v in self.table_rows())
        lines = [head, vals, "", f"confusion ({CONFUSION_HEADER}):"]
        for label, row in zip(LABELS, self.confusion):
            lines.append(f"  {label.value:<6} " + " ".join(f"{c:5d}" for c in row))
        return "\n".join(lines)


def compute_metrics(preds: Sequence[Label], gold: Sequence[Label]) -> EvalReport:
    if len(preds) != len(gold):
        raise ValueError("preds and gold differ in length")
    if not gold:
        raise ValueError("need at least one example")
    idx = {label: i for i, label in enumerate(LABELS)}
    matrix = [[0, 0, 0] for _ in LABELS]
    for p, g in zip(preds, gold):
        matrix[idx[g]][idx[p]] += 1
    per_class = {}
    for k, label in enumerate(LABELS):
        tp = matrix[k][k]
        predicted = sum(matrix[r][k] for r in range(3))
        support = sum(matrix[k])
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        # 2tp / (predicted + support) avoids the rounding of the P/R form
        f1 = 2 * tp / (predicted + support) if tp else 0.0
        per_class[label] = ClassScores(precision, recall, f1, support)
    macro = sum(s.f1 for s in per_class.values()) / 3
    accuracy = sum(matrix[k][k] for k in range(3)) / len(gold)
    return EvalReport(per_class, macro, accuracy, tuple(tuple(r) for r in matrix), len(gold))


def nearest_rank(values: Sequence[float], pct: float) -> float:
    ordered = sorted(values)
    rank = max(1, math.ceil(pct / 100.0 * len(ordered)))
    return ordered[rank - 1]


@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    p95: float
    p99: float
    max: float
    std: float
    n: int

    @classmethod
    def of(cls, values: Sequence[float]) -> Optional["Summary"]:
        if not values:
            return None
        return cls(statistics.fmean(values), nearest_rank(values, 50), nearest_rank(values, 95),
                   nearest_rank(values, 99), max(values), statistics.pstdev(values), len(values))


@dataclass(frozen=True)
class StageLatency:
    reach_rate: float
    cond_mean: Optional[float]
    cond_median: Optional[float]
    cond_p95: Optional[float]
    cond_p99: Optional[float]
    expected_contribution: float
    n_reached: int


@dataclass(frozen=True)
class LatencyRun:
    """One citation's cascade timings: stage -> seconds, or None if not reached."""

    stages: dict
    error: bool = False
    gold: Optional[Label] = None

    @property
    def total(self) -> float:
        return sum(v for v in self.stages.values() if v is not None)

    @property
    def structured_total(self) -> float:
        return sum(v for s, v in self.stages.items() if v is not None and s is not Source.WEB_SEARCH)


@dataclass(frozen=True)
class LatencyStats:
    stages: dict
    overall: Optional[Summary]
    structured_only: Optional[Summary]
    per_class: dict = field(default_factory=dict)
    n_runs: int = 0
    n_excluded: int = 0


def aggregate_latency(runs: Sequence[LatencyRun]) -> LatencyStats:
    kept = [r for r in runs if not r.error]
    n = len(kept)
    stages = {}
    for stage in CASCADE_ORDER:
        times = [r.stages[stage] for r in kept if r.stages.get(stage) is not None]
        reach = len(times) / n if n else 0.0
        if times:
            mean = statistics.fmean(times)
            stages[stage] = StageLatency(reach, mean, nearest_rank(times, 50),
                                         nearest_rank(times, 95), nearest_rank(times, 99),
                                         reach * mean, len(times))
        else:
            stages[stage] = StageLatency(reach, None, None, None, None, 0.0, 0)
    per_class = {}
    for label in LABELS:
        totals = [r.total for r in kept if r.gold is label]
        if totals:
            per_class[label] = Summary.of(totals)
    return LatencyStats(
        stages=stages,
        overall=Summary.of([r.total for r in kept]),
        structured_only=Summary.of([r.structured_total for r in kept]),
        per_class=per_class,
        n_runs=n,
        n_excluded=len(runs) - n,
    )
