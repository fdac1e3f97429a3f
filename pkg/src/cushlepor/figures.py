"""Matplotlib figure rendering for report and tuning outputs.

Figures are written to files (Agg backend); nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .stats import HISTOGRAM_BINS  # noqa: E402

_BIN_WIDTH = 1.0 / HISTOGRAM_BINS
_BIN_LEFTS = [i * _BIN_WIDTH for i in range(HISTOGRAM_BINS)]


def score_distribution_figure(metric_hist: Sequence[int],
                              gold_hists: Mapping[str, Sequence[int]],
                              path: str | Path) -> Path:
    """Bar chart of segment counts per score interval, metric vs gold."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.bar(_BIN_LEFTS, metric_hist, width=_BIN_WIDTH, align="edge",
           label="metric", color="#3465a4", alpha=0.85, edgecolor="white")
    for i, (name, hist) in enumerate(sorted(gold_hists.items())):
        ax.step([*_BIN_LEFTS, 1.0], [*hist, hist[-1]], where="post",
                label=f"gold: {name}", linewidth=1.8,
                color=plt.get_cmap("tab10")(1 + i))
    ax.set_xlabel("score")
    ax.set_ylabel("segments")
    ax.set_xlim(0.0, 1.0)
    ax.set_title("Score distribution")
    if gold_hists:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def rmse_comparison_figure(labels: Sequence[str], values: Sequence[float],
                           path: str | Path, title: str = "RMSE against gold scores") -> Path:
    """Bar chart comparing RMSE values (lower is better)."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    bars = ax.bar(range(len(values)), values, width=0.55,
                  color=["#888a85", "#3465a4", "#73d216", "#f57900"][:len(values)])
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_ylabel("RMSE (lower is better)")
    ax.set_title(title)
    for bar, value in zip(bars, values):
        ax.annotate(f"{value:.4f}", (bar.get_x() + bar.get_width() / 2, value),
                    ha="center", va="bottom", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
