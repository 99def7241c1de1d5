"""Confusion matrices and classification metrics.

Headline metrics are computed on the binary collapse (Normal vs Anomaly);
the 13-class matrix is carried alongside for diagnostics. Degenerate 0/0
ratios resolve to 0 and are flagged rather than raised, so batch
comparisons never abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..core.message import ALL_LABELS, ClassLabel

__all__ = [
    "METRIC_NAMES",
    "LOWER_IS_BETTER",
    "BinaryConfusion",
    "MulticlassConfusion",
    "MetricsReport",
    "confusion",
    "binary_confusion",
    "multiclass_confusion",
    "standard_metrics",
    "advanced_metrics",
    "compute_metrics",
]

METRIC_NAMES = (
    "tpr", "fpr", "fnr", "precision", "accuracy", "f1",
    "markedness", "informedness", "mcc",
)

# For best-value marking in comparisons.
LOWER_IS_BETTER = frozenset({"fpr", "fnr"})


@dataclass(frozen=True)
class BinaryConfusion:
    """Anomaly-positive 2x2 outcome counts."""

    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}


@dataclass(frozen=True)
class MulticlassConfusion:
    """13x13 counts; rows = truth, columns = prediction, class order fixed."""

    cells: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def per_class_accuracy(self) -> dict[ClassLabel, float]:
        out = {}
        for i, label in enumerate(ALL_LABELS):
            row_total = sum(self.cells[i])
            out[label] = self.cells[i][i] / row_total if row_total else 0.0
        return out

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.cells]


def _check_lengths(pred, truth):
    if len(pred) != len(truth):
        raise ValueError(f"label sequences differ in length: {len(pred)} vs {len(truth)}")
    if not pred:
        raise ValueError("cannot build a confusion matrix from empty labels")


def binary_confusion(pred, truth) -> BinaryConfusion:
    """Collapse to Normal-vs-Anomaly: every non-Normal label counts as Anomaly."""
    _check_lengths(pred, truth)
    tp = fn = fp = tn = 0
    for p, t in zip(pred, truth):
        p_anom = p != ClassLabel.NORMAL
        t_anom = t != ClassLabel.NORMAL
        if t_anom and p_anom:
            tp += 1
        elif t_anom and not p_anom:
            fn += 1
        elif not t_anom and p_anom:
            fp += 1
        else:
            tn += 1
    return BinaryConfusion(tp=tp, fn=fn, fp=fp, tn=tn)


def multiclass_confusion(pred, truth) -> MulticlassConfusion:
    """Strict 13-class matrix: a ZeroDay prediction for a known attack class
    is still off-diagonal."""
    _check_lengths(pred, truth)
    index = {label: i for i, label in enumerate(ALL_LABELS)}
    cells = [[0] * len(ALL_LABELS) for _ in ALL_LABELS]
    for p, t in zip(pred, truth):
        cells[index[t]][index[p]] += 1
    return MulticlassConfusion(tuple(tuple(row) for row in cells))


def confusion(pred, truth, dimension: int):
    """Dimension 2 -> binary collapse, 13 -> full class matrix."""
    if dimension == 2:
        return binary_confusion(pred, truth)
    if dimension == 13:
        return multiclass_confusion(pred, truth)
    raise ValueError(f"confusion dimension must be 2 or 13, got {dimension}")


def _ratio(num: int, den: int, name: str, flags: set[str]) -> float:
    if den == 0:
        flags.add(name)
        return 0.0
    return num / den


def standard_metrics(cm: BinaryConfusion) -> tuple[dict[str, float], set[str]]:
    """TPR/FPR/FNR/Precision/Accuracy/F1 with 0/0 -> 0-and-flag conventions."""
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    flags: set[str] = set()
    tpr = _ratio(cm.tp, cm.tp + cm.fn, "tpr", flags)
    fpr = _ratio(cm.fp, cm.fp + cm.tn, "fpr", flags)
    fnr = _ratio(cm.fn, cm.fn + cm.tp, "fnr", flags)
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", flags)
    accuracy = (cm.tp + cm.tn) / cm.total
    if precision + tpr == 0:
        flags.add("f1")
        f1 = 0.0
    else:
        f1 = 2 * precision * tpr / (precision + tpr)
    return (
        {"tpr": tpr, "fpr": fpr, "fnr": fnr, "precision": precision,
         "accuracy": accuracy, "f1": f1},
        flags,
    )


def advanced_metrics(cm: BinaryConfusion) -> tuple[dict[str, float], set[str]]:
    """Markedness, informedness and MCC; zero factors under the MCC root
    resolve to 0 with a degenerate flag."""
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    flags: set[str] = set()
    precision = _ratio(cm.tp, cm.tp + cm.fp, "markedness", flags)
    npv = _ratio(cm.tn, cm.tn + cm.fn, "markedness", flags)
    tpr = _ratio(cm.tp, cm.tp + cm.fn, "informedness", flags)
    tnr = _ratio(cm.tn, cm.tn + cm.fp, "informedness", flags)
    markedness = precision + npv - 1.0
    informedness = tpr + tnr - 1.0
    denom = (
        (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn)
    )
    if denom == 0:
        flags.add("mcc")
        mcc = 0.0
    else:
        mcc = (cm.tp * cm.tn - cm.fp * cm.fn) / math.sqrt(float(denom))
    return (
        {"markedness": markedness, "informedness": informedness, "mcc": mcc},
        flags,
    )


@dataclass(frozen=True)
class MetricsReport:
    """Standard + advanced metrics for one detector run."""

    tpr: float
    fpr: float
    fnr: float
    precision: float
    accuracy: float
    f1: float
    markedness: float
    informedness: float
    mcc: float
    source_detector: str = ""
    corpus_hash: str = ""
    degenerate: frozenset[str] = field(default_factory=frozenset)

    def metric(self, name: str) -> float:
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {name!r}")
        return getattr(self, name)

    def metrics_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def compute_metrics(cm: BinaryConfusion, detector: str = "",
                    corpus_hash: str = "") -> MetricsReport:
    std, std_flags = standard_metrics(cm)
    adv, adv_flags = advanced_metrics(cm)
    return MetricsReport(
        **std, **adv,
        source_detector=detector,
        corpus_hash=corpus_hash,
        degenerate=frozenset(std_flags | adv_flags),
    )
