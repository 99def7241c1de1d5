"""Objective functions steering the generator: protocol, balance, novelty."""

from __future__ import annotations

import math

from ..core.message import (
    ALL_LABELS,
    CATEGORICAL_FIELDS,
    ClassLabel,
    MessageWindow,
    NUMERIC_FIELDS,
    NUMERIC_RANGES,
)
from ..core.rules import RULE_IDS, evaluate_rules
from ..quality import RULE_LAMBDAS

__all__ = ["f_protocol", "f_balance", "f_novel", "mixed_distance", "FEATURE_SPANS"]

FEATURE_SPANS = tuple(
    float(NUMERIC_RANGES[name][1] - NUMERIC_RANGES[name][0]) for name in NUMERIC_FIELDS
)

FEATURE_COUNT = len(NUMERIC_FIELDS) + len(CATEGORICAL_FIELDS)  # 14


def f_protocol(window: MessageWindow, weights) -> float:
    """Weighted rule-compliance score: sum of w_j * GR_j.

    Compliant rules contribute w_j; violated ones w_j * e^(-lambda_j * V_j)
    with V_j the window's worst severity for that rule. Maximal exactly when
    the window is fully compliant.
    """
    if len(weights) != 8:
        raise ValueError("need one weight per rule")
    report = evaluate_rules(window)
    total = 0.0
    for rule_id, w in zip(RULE_IDS, weights):
        outcome = report.outcomes[rule_id]
        score = 1.0 if outcome.compliant else math.exp(
            -RULE_LAMBDAS[rule_id] * outcome.severity
        )
        total += w * score
    return total


def f_balance(corpus_state: dict[ClassLabel, int]) -> float:
    """Negative total deviation from the uniform 13-class distribution.

    0 iff perfectly uniform; more negative as the distribution skews.
    """
    total = sum(corpus_state.get(label, 0) for label in ALL_LABELS)
    if total <= 0:
        raise ValueError("balance objective needs at least one counted window")
    uniform = 1.0 / len(ALL_LABELS)
    return -sum(
        abs(corpus_state.get(label, 0) / total - uniform) for label in ALL_LABELS
    )


def mixed_distance(a: MessageWindow, b: MessageWindow) -> float:
    """Bounded mixed-feature distance between two windows.

    Per aligned message position: range-normalized absolute numeric deltas
    plus categorical mismatch indicators, divided by the 14-feature count;
    averaged over the aligned prefix.
    """
    aligned = min(len(a.messages), len(b.messages))
    total = 0.0
    for i in range(aligned):
        ma, mb = a.messages[i], b.messages[i]
        d = 0.0
        for name, span in zip(NUMERIC_FIELDS, FEATURE_SPANS):
            d += abs(getattr(ma, name) - getattr(mb, name)) / span
        for name in CATEGORICAL_FIELDS:
            d += 1.0 if getattr(ma, name) != getattr(mb, name) else 0.0
        total += d / FEATURE_COUNT
    return total / aligned


def f_novel(candidate: MessageWindow, corpus) -> float:
    """Distance to the nearest existing window; 0 iff an identical one exists."""
    windows = getattr(corpus, "windows", corpus)
    windows = list(windows)
    if not windows:
        raise ValueError("novelty objective needs a non-empty corpus")
    return min(mixed_distance(candidate, w) for w in windows)
