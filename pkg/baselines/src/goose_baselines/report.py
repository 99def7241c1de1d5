"""Confusion counting, metric formulas, and report emission."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .data import CLASS_NAMES, Window
from .schema import validate_report


def binary_counts(pred_anomaly: np.ndarray, truth_anomaly: np.ndarray) -> dict:
    pred = np.asarray(pred_anomaly, dtype=bool)
    truth = np.asarray(truth_anomaly, dtype=bool)
    return {
        "tp": int(np.sum(pred & truth)),
        "fn": int(np.sum(~pred & truth)),
        "fp": int(np.sum(pred & ~truth)),
        "tn": int(np.sum(~pred & ~truth)),
    }


def metrics_from_counts(c: dict) -> dict:
    """Standard + advanced metrics with 0/0 ratios resolving to 0."""
    tp, fn, fp, tn = c["tp"], c["fn"], c["fp"], c["tn"]

    def div(num, den):
        return num / den if den else 0.0

    tpr = div(tp, tp + fn)
    fpr = div(fp, fp + tn)
    precision = div(tp, tp + fp)
    f1 = div(2 * precision * tpr, precision + tpr)
    markedness = precision + div(tn, tn + fn) - 1.0
    informedness = tpr + div(tn, tn + fp) - 1.0
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = (tp * tn - fp * fn) / math.sqrt(denom) if denom else 0.0
    return {
        "tpr": tpr,
        "fpr": fpr,
        "fnr": div(fn, fn + tp),
        "precision": precision,
        "accuracy": div(tp + tn, tp + fn + fp + tn),
        "f1": f1,
        "markedness": markedness,
        "informedness": informedness,
        "mcc": mcc,
    }


def multiclass_cells(windows: list[Window], pred_anomaly: np.ndarray) -> list[list[int]]:
    """13x13 truth-by-prediction counts.

    These detectors are binary: anomaly calls land in the ZeroDay column
    (anomalous, class unknown), normal calls in the Normal column.
    """
    index = {name: i for i, name in enumerate(CLASS_NAMES)}
    cells = [[0] * len(CLASS_NAMES) for _ in CLASS_NAMES]
    normal_col = index["Normal"]
    anomaly_col = index["ZeroDay"]
    for window, is_anomaly in zip(windows, pred_anomaly):
        if window.label is None:
            raise ValueError(f"window {window.window_id!r} carries no truth label")
        row = index[window.label]
        cells[row][anomaly_col if is_anomaly else normal_col] += 1
    return cells


def build_report(detector: str, corpus_hash: str, windows: list[Window],
                 pred_anomaly: np.ndarray) -> dict:
    truth = np.array([w.is_anomaly for w in windows], dtype=bool)
    counts = binary_counts(pred_anomaly, truth)
    payload = {
        "detector": detector,
        "corpus_hash": corpus_hash,
        "binary_confusion": counts,
        "multiclass_confusion": multiclass_cells(windows, pred_anomaly),
        "metrics": metrics_from_counts(counts),
    }
    validate_report(payload)
    return payload


def write_report(payload: dict, path) -> None:
    validate_report(payload)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")
