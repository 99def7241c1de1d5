"""Numeric perturbation (objective-guided deltas) and range projection."""

from __future__ import annotations

import numpy as np

from ..core.message import MessageWindow, NUMERIC_FIELDS, NUMERIC_RANGES
from .config import GenerationConfig
from .objectives import FEATURE_SPANS
from .surrogates import FEATURE_STEPS, WindowShape, surrogate_gradients, window_numeric

__all__ = ["numeric_perturbation", "project_numeric"]

_ST_COL = NUMERIC_FIELDS.index("st_num")
_CLAMP_LO = np.array([NUMERIC_RANGES[n][0] for n in NUMERIC_FIELDS], dtype=np.float64)
_CLAMP_HI = np.array([NUMERIC_RANGES[n][1] for n in NUMERIC_FIELDS], dtype=np.float64)
_ST_MOD = 2**32


def _novelty_gradient(x: np.ndarray, nearest: np.ndarray, aligned: int) -> np.ndarray:
    """Central differences of the mixed distance against the nearest window.

    The categorical part of the distance is constant under numeric probing,
    so only the aligned numeric prefix contributes.
    """
    grad = np.zeros_like(x)
    if aligned == 0:
        return grad
    spans = np.asarray(FEATURE_SPANS)
    n, nf = x.shape

    def dist(batch: np.ndarray) -> np.ndarray:
        delta = np.abs(batch[:, :aligned, :] - nearest[None, :aligned, :]) / spans
        return delta.sum(axis=(1, 2)) / (14.0 * aligned)

    steps = np.tile(FEATURE_STEPS, n)
    bump = np.zeros((n * nf, n, nf), dtype=np.float64)
    bump[np.arange(n * nf), np.repeat(np.arange(n), nf), np.tile(np.arange(nf), n)] = steps
    fwd = dist(x[None, :, :] + bump)
    back = dist(x[None, :, :] - bump)
    return ((fwd - back) / (2.0 * steps)).reshape(n, nf)


def numeric_perturbation(
    window: MessageWindow,
    config: GenerationConfig,
    corpus_state=None,
    corpus=None,
) -> np.ndarray:
    """Per-feature real deltas for the window's numeric matrix, shape (n, 9).

    delta = alpha * grad(protocol) + beta * grad(balance) + gamma * grad(novelty)
            - lambda * sum over targeted rules of grad(rule surrogate)

    grad(balance) is identically zero with respect to message features;
    class balance is steered by corpus plan selection instead. Rule gradients
    come from central finite differences on the smoothed surrogates.
    """
    del corpus_state  # balance gradient is zero; kept for signature parity
    x = window_numeric(window)
    shape = WindowShape(window)
    grads = surrogate_gradients(x, shape)  # (n, 9, 8)
    weights = np.asarray(config.rule_weights)
    protocol_grad = grads @ weights
    delta = config.alpha * protocol_grad

    if corpus is not None and hasattr(corpus, "nearest_numeric"):
        near_x, aligned = corpus.nearest_numeric(window)
        if near_x is not None:
            delta = delta + config.gamma * _novelty_gradient(x, near_x, aligned)
    else:
        windows = list(getattr(corpus, "windows", corpus) or ())
        if windows:
            from .objectives import mixed_distance

            nearest = min(windows, key=lambda w: mixed_distance(window, w))
            aligned = min(len(window.messages), len(nearest.messages))
            near_x = window_numeric(nearest)
            delta = delta + config.gamma * _novelty_gradient(x, near_x, aligned)

    if config.target_rules:
        targeted = grads[:, :, [r - 1 for r in sorted(config.target_rules)]].sum(axis=2)
        delta = delta - config.lambda_violation * targeted
    return delta


def project_numeric(values) -> np.ndarray:
    """Project perturbed numerics into the valid integer feature space.

    Rounds half away from zero, clamps every field into its range, and wraps
    st_num modulo 2^32. Idempotent. Accepts a (9,) vector or (n, 9) matrix.
    """
    arr = np.asarray(values, dtype=np.float64)
    rounded = np.sign(arr) * np.floor(np.abs(arr) + 0.5)
    st = np.mod(rounded[..., _ST_COL], _ST_MOD)
    clamped = np.clip(rounded, _CLAMP_LO, _CLAMP_HI)
    clamped[..., _ST_COL] = st
    return clamped.astype(np.int64)
