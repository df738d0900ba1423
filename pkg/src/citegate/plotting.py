"""Report figures, rendered headless to PNG files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .models import CASCADE_ORDER, LABELS  # noqa: E402


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def confusion_heatmap(report, path) -> Path:
    matrix = np.array(report.confusion)
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    ax.imshow(matrix, cmap="Blues")
    names = [label.value for label in LABELS]
    ax.set_xticks(range(3), names)
    ax.set_yticks(range(3), names)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    peak = matrix.max() or 1
    for i in range(3):
        for j in range(3):
            ax.text(j, i, str(matrix[i, j]), ha="center", va="center",
                    color="white" if matrix[i, j] > peak / 2 else "black")
    ax.set_title(f"accuracy {100 * report.accuracy:.1f}%")
    return _save(fig, path)


def f1_bars(report, path) -> Path:
    names = [label.value for label in LABELS] + ["macro"]
    values = [100 * report.per_class_f1[label] for label in LABELS] + [100 * report.macro_f1]
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    bars = ax.bar(names, values, color=["#4c72b0", "#dd8452", "#c44e52", "#55a868"])
    ax.bar_label(bars, fmt="%.1f")
    ax.set_ylim(0, 110)
    ax.set_ylabel("F1 (%)")
    return _save(fig, path)


def stage_latency_bars(stats, path) -> Path:
    names = [s.value for s in CASCADE_ORDER]
    reach = [stats.stages[s].reach_rate for s in CASCADE_ORDER]
    contrib = [stats.stages[s].expected_contribution for s in CASCADE_ORDER]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.4, 3.2))
    ax1.bar(names, reach, color="#4c72b0")
    ax1.set_ylim(0, 1.05)
    ax1.set_ylabel("reach rate")
    ax2.bar(names, contrib, color="#dd8452")
    ax2.set_ylabel("expected contribution (s)")
    for ax in (ax1, ax2):
        ax.tick_params(axis="x", rotation=30)
    return _save(fig, path)


def calibration_heatmap(sweep, path, best=None) -> Path:
    """``sweep`` is a list of ``(tau_m, tau_e, f1)``; cells with tau_m > tau_e stay blank."""
    ms = sorted({m for m, _, _ in sweep})
    es = sorted({e for _, e, _ in sweep})
    grid = np.full((len(es), len(ms)), np.nan)
    col, row = {m: i for i, m in enumerate(ms)}, {e: i for i, e in enumerate(es)}
    for m, e, f1 in sweep:
        grid[row[e], col[m]] = float(f1)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(grid, origin="lower", cmap="viridis", aspect="auto",
                   extent=(ms[0], ms[-1], es[0], es[-1]))
    fig.colorbar(im, ax=ax, label="support-weighted F1")
    if best is not None:
        ax.plot([best.tau_m], [best.tau_e], marker="x", color="red", markersize=9)
    ax.set_xlabel("tau_m")
    ax.set_ylabel("tau_e")
    return _save(fig, path)
