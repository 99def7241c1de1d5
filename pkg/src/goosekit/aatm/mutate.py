"""Categorical feature mutation with modulo index wrapping."""

from __future__ import annotations

import math

import numpy as np

from ..core.message import CATEGORICAL_FIELDS, MessageWindow
from .config import CategoricalVocab, GenerationConfig

__all__ = ["round_half_away", "mutate_value", "base_mutation", "categorical_mutation"]


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero (1.5 -> 2, -1.5 -> -2)."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def mutate_value(vocab: CategoricalVocab, feature: str, value: str, m: float) -> str:
    """Shift a categorical value by Round(m) positions, wrapping modulo |C|."""
    idx = vocab.index(feature, value)
    options = vocab.values[feature]
    return options[(idx + round_half_away(m)) % len(options)]


def base_mutation(config: GenerationConfig, rng: np.random.Generator) -> dict[str, float]:
    """Untargeted mutation pull per feature.

    protocol_mut is 0 (compliant targets stay compliant), balance_mut is 0
    (balance is steered by plan selection), novelty_mut is a seeded unit
    step in {-1, 0, 1}.
    """
    return {
        feature: config.alpha * 0.0
        + config.beta * 0.0
        + config.gamma * float(rng.integers(-1, 2))
        for feature in CATEGORICAL_FIELDS
    }


def categorical_mutation(
    window: MessageWindow,
    config: GenerationConfig,
    vocab: CategoricalVocab,
    rng: np.random.Generator | None = None,
):
    """Per-feature mutation magnitudes and the resulting per-message values.

    m_j = base_mutation_j - lambda * sum over targeted rules of T[r][j];
    each message's new value is C_j[(I_j(old) + Round(m_j)) mod |C_j|].
    Raises ValueError when a current value is missing from its vocabulary.
    """
    rng = rng or np.random.default_rng(config.rng_seed)
    base = base_mutation(config, rng)
    mutations = {
        feature: base[feature]
        - config.lambda_violation * vocab.shift(config.target_rules, feature)
        for feature in CATEGORICAL_FIELDS
    }
    new_values = [
        {
            feature: mutate_value(vocab, feature, getattr(msg, feature), mutations[feature])
            for feature in CATEGORICAL_FIELDS
        }
        for msg in window.messages
    ]
    return mutations, new_values
