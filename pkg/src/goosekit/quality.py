"""Corpus quality scoring: Balance Rate and Realism Rate.

Balance Rate combines the min/max class-count ratio with normalized Shannon
entropy over the fixed 13-class set. Realism Rate scores every message by an
exponentially penalized product over the eight rules and averages: first over
the messages of a window, then over the windows of a corpus.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .core.message import ALL_LABELS, ClassLabel, MessageWindow
from .core.rules import RULE_IDS, collect_violations

__all__ = [
    "RULE_LAMBDAS",
    "QualityReport",
    "balance_rate",
    "message_rule_scores",
    "realism_rate_window",
    "realism_rate_corpus",
    "quality_report",
]

# Importance weight per rule for the exponential violation penalty.
RULE_LAMBDAS = {1: 3.0, 2: 3.0, 3: 5.0, 4: 3.0, 5: 2.0, 6: 1.0, 7: 2.0, 8: 5.0}

CLASS_COUNT = len(ALL_LABELS)  # 13


def balance_rate(counts: dict[ClassLabel, int]) -> float:
    """Balance of a class-count distribution, in [0, 1].

    0.5 * (min/max + E) with E the Shannon entropy normalized by log2(13).
    The class set is fixed at 13: absent classes count as zero (so the
    min/max term is 0 and they contribute nothing to E). A single-class
    corpus therefore scores 0; a perfectly uniform one scores 1.
    """
    full = {label: int(counts.get(label, 0)) for label in ALL_LABELS}
    if any(v < 0 for v in full.values()):
        raise ValueError("class counts must be non-negative")
    total = sum(full.values())
    if total == 0:
        raise ValueError("balance rate needs at least one counted window")
    lo = min(full.values())
    hi = max(full.values())
    entropy = 0.0
    for n in full.values():
        if n > 0:
            p = n / total
            entropy -= p * math.log2(p)
    normalized_entropy = entropy / math.log2(CLASS_COUNT)
    return 0.5 * (lo / hi + normalized_entropy)


def message_rule_scores(window: MessageWindow) -> list[float]:
    """Per-message realism scores: product over rules of 1 or e^(-lambda*V).

    A violation event penalizes the offending message; burst (rule 6) events
    penalize every message inside the dense run.
    """
    n = len(window.messages)
    # worst per-rule severity attributed to each message
    per_message: list[dict[int, float]] = [dict() for _ in range(n)]
    for event in collect_violations(window):
        if event.span is not None:
            targets = range(event.span[0], event.span[1] + 1)
        else:
            targets = (event.index,)
        for i in targets:
            prev = per_message[i].get(event.rule_id, 0.0)
            per_message[i][event.rule_id] = max(prev, event.severity)
    scores = []
    for hits in per_message:
        score = 1.0
        for rule_id, severity in hits.items():
            score *= math.exp(-RULE_LAMBDAS[rule_id] * severity)
        scores.append(score)
    return scores


def realism_rate_window(window: MessageWindow) -> float:
    """Mean per-message realism score of one window; 1.0 for fully
    compliant windows."""
    scores = message_rule_scores(window)
    return sum(scores) / len(scores)


def realism_rate_corpus(windows) -> float:
    """Aggregate realism: arithmetic mean of per-window realism."""
    windows = list(windows)
    if not windows:
        raise ValueError("realism rate needs a non-empty corpus")
    return sum(realism_rate_window(w) for w in windows) / len(windows)


@dataclass(frozen=True)
class QualityReport:
    balance_rate: float
    realism_rate: float
    per_class_counts: dict[str, int]
    per_rule_mean_scores: tuple[float, ...]
    window_count: int

    def to_dict(self) -> dict:
        return {
            "balance_rate": self.balance_rate,
            "realism_rate": self.realism_rate,
            "per_class_counts": dict(self.per_class_counts),
            "per_rule_mean_scores": list(self.per_rule_mean_scores),
            "window_count": self.window_count,
        }


def _window_rule_score(window: MessageWindow, rule_id: int) -> float:
    """Mean over messages of the single-rule penalty factor."""
    n = len(window.messages)
    worst = [0.0] * n
    flagged = [False] * n
    for event in collect_violations(window, (rule_id,)):
        targets = (
            range(event.span[0], event.span[1] + 1)
            if event.span is not None
            else (event.index,)
        )
        for i in targets:
            flagged[i] = True
            worst[i] = max(worst[i], event.severity)
    total = 0.0
    for i in range(n):
        total += math.exp(-RULE_LAMBDAS[rule_id] * worst[i]) if flagged[i] else 1.0
    return total / n


def quality_report(windows) -> QualityReport:
    """Score a labeled corpus: BR, RR, class counts, per-rule mean scores."""
    windows = list(windows)
    if not windows:
        raise ValueError("cannot score an empty corpus")
    unlabeled = [w.window_id for w in windows if w.label is None]
    if unlabeled:
        raise ValueError(
            f"balance rate needs a fully labeled corpus; window "
            f"{unlabeled[0]!r} (and {len(unlabeled) - 1} more) carry no label"
        )
    counts = Counter(w.label for w in windows)
    label_counts = {label: counts.get(label, 0) for label in ALL_LABELS}
    rule_means = tuple(
        sum(_window_rule_score(w, rule_id) for w in windows) / len(windows)
        for rule_id in RULE_IDS
    )
    return QualityReport(
        balance_rate=balance_rate(label_counts),
        realism_rate=realism_rate_corpus(windows),
        per_class_counts={label.value: n for label, n in label_counts.items()},
        per_rule_mean_scores=rule_means,
        window_count=len(windows),
    )
