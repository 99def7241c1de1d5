"""Matplotlib renderings written next to report outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core.message import ALL_LABELS
from .detect.evaluate import ComparisonTable
from .detect.metrics import METRIC_NAMES, BinaryConfusion, MulticlassConfusion
from .quality import QualityReport

__all__ = [
    "render_class_distribution",
    "render_quality",
    "render_binary_confusion",
    "render_multiclass_confusion",
    "render_comparison",
]

_LABEL_NAMES = [label.value for label in ALL_LABELS]


def render_class_distribution(counts: dict[str, int], path, title="Class distribution"):
    values = [counts.get(name, 0) for name in _LABEL_NAMES]
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.bar(_LABEL_NAMES, values, color="#4878a8")
    ax.set_ylabel("windows")
    ax.set_title(title)
    ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_quality(report: QualityReport, path):
    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4), width_ratios=[2, 1])
    values = [report.per_class_counts.get(name, 0) for name in _LABEL_NAMES]
    left.bar(_LABEL_NAMES, values, color="#4878a8")
    left.set_ylabel("windows")
    left.set_title("Class distribution")
    left.tick_params(axis="x", rotation=45)
    right.bar(["Balance", "Realism"], [report.balance_rate, report.realism_rate],
              color=["#4878a8", "#a85448"])
    right.set_ylim(0, 1.05)
    right.set_title("Quality rates")
    for i, value in enumerate((report.balance_rate, report.realism_rate)):
        right.text(i, value + 0.02, f"{value:.3f}", ha="center")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _heatmap(ax, cells, labels, title):
    arr = np.asarray(cells, dtype=float)
    ax.imshow(arr, cmap="Blues")
    ax.set_xticks(range(len(labels)), labels, rotation=45, ha="right")
    ax.set_yticks(range(len(labels)), labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("actual")
    ax.set_title(title)
    threshold = arr.max() / 2 if arr.max() else 0.5
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            ax.text(j, i, f"{int(arr[i, j])}", ha="center", va="center",
                    fontsize=7, color="white" if arr[i, j] > threshold else "black")


def render_binary_confusion(cm: BinaryConfusion, path, title="Binary confusion"):
    fig, ax = plt.subplots(figsize=(4, 4))
    _heatmap(ax, [[cm.tp, cm.fn], [cm.fp, cm.tn]], ["Anomaly", "Normal"], title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_multiclass_confusion(cm: MulticlassConfusion, path,
                                title="Multiclass confusion"):
    fig, ax = plt.subplots(figsize=(9, 8))
    _heatmap(ax, cm.to_lists(), _LABEL_NAMES, title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_comparison(table: ComparisonTable, path):
    names = list(METRIC_NAMES)
    x = np.arange(len(names))
    width = 0.8 / len(table.detectors)
    fig, ax = plt.subplots(figsize=(11, 4.5))
    for i, detector in enumerate(table.detectors):
        heights = [table.values[m][i] for m in names]
        ax.bar(x + i * width, heights, width, label=detector)
    ax.set_xticks(x + width * (len(table.detectors) - 1) / 2, names, rotation=30)
    ax.set_ylim(-1.05, 1.05)
    ax.legend(fontsize=8)
    ax.set_title("Detector comparison")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
