"""Smooth per-rule surrogates and finite-difference gradients.

The rule indicators are discrete, so each rule gets a continuous
distance-to-violation stand-in built from sigmoids and Gaussian bumps over
the window's numeric matrix (rows = messages, columns = the 9 numerical
features). Higher is more compliant. Gradients are central finite
differences with per-feature steps (1 unit for time fields and counters,
0.5 for the binary data fields).
"""

from __future__ import annotations

import numpy as np

from ..core.message import MessageWindow, NUMERIC_FIELDS

__all__ = [
    "FEATURE_STEPS",
    "COL",
    "window_numeric",
    "WindowShape",
    "rule_surrogates",
    "surrogate_gradients",
]

COL = {name: i for i, name in enumerate(NUMERIC_FIELDS)}

FEATURE_STEPS = np.array([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5])


def window_numeric(window: MessageWindow) -> np.ndarray:
    """(n, 9) float matrix of the window's numerical features."""
    return np.array([m.numeric_vector() for m in window.messages], dtype=np.float64)


class WindowShape:
    """Pairing structure of a window, fixed while numerics are perturbed.

    Chain pairs follow same-(dm, sm) predecessors; positional pairs are
    consecutive messages.
    """

    def __init__(self, window: MessageWindow):
        last_seen: dict[tuple[str, str], int] = {}
        chain = []
        for i, msg in enumerate(window.messages):
            key = (msg.dm, msg.sm)
            if key in last_seen:
                chain.append((last_seen[key], i))
            last_seen[key] = i
        self.chain_prev = np.array([p for p, _ in chain], dtype=np.intp)
        self.chain_cur = np.array([c for _, c in chain], dtype=np.intp)
        n = len(window.messages)
        self.pos_prev = np.arange(0, n - 1, dtype=np.intp)
        self.pos_cur = np.arange(1, n, dtype=np.intp)
        self.n_messages = n


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -60.0, 60.0)))


def _bump(z: np.ndarray, tau: float = 1.0) -> np.ndarray:
    return np.exp(-np.clip((z / tau) ** 2 / 2.0, 0.0, 120.0))


def _times_us(x: np.ndarray) -> np.ndarray:
    return ((x[..., 0] * 60 + x[..., 1]) * 60 + x[..., 2]) * 1e6 + x[..., 3]


def rule_surrogates(x: np.ndarray, shape: WindowShape) -> np.ndarray:
    """Surrogate compliance scores, shape (..., 8), for a (..., n, 9) batch."""
    batch_shape = x.shape[:-2]
    out = np.ones(batch_shape + (8,), dtype=np.float64)

    if shape.chain_prev.size:
        prev = x[..., shape.chain_prev, :]
        cur = x[..., shape.chain_cur, :]
        d_sq = cur[..., COL["sq_num"]] - prev[..., COL["sq_num"]]
        d_st = cur[..., COL["st_num"]] - prev[..., COL["st_num"]]
        d_dat = (
            (cur[..., COL["data1"]] - prev[..., COL["data1"]]) ** 2
            + (cur[..., COL["data2"]] - prev[..., COL["data2"]]) ** 2
        )
        data_change = np.tanh(2.0 * d_dat)
        # rule 1: compliant side is the +1 increment; breaking downward
        # (repeat/decrease) is the canonical violation direction
        out[..., 0] = _sigmoid(4.0 * (d_sq - 0.5)).mean(axis=-1)
        # rule 2: data flip with st frozen and sq incrementing
        out[..., 1] = 1.0 - (data_change * _bump(d_st) * _bump(d_sq - 1.0)).mean(axis=-1)
        # rule 3: st stays or steps by one
        out[..., 2] = (
            _sigmoid(4.0 * (d_st + 0.5)) * _sigmoid(4.0 * (1.5 - d_st))
        ).mean(axis=-1)
        # rule 8: data flip with st and sq both frozen
        out[..., 7] = 1.0 - (data_change * _bump(d_st) * _bump(d_sq)).mean(axis=-1)

    if shape.pos_prev.size:
        d_appid = (
            x[..., shape.pos_cur, COL["appid"]] - x[..., shape.pos_prev, COL["appid"]]
        )
        out[..., 3] = _bump(d_appid, tau=2.0).mean(axis=-1)
        times = _times_us(x)
        gaps = times[..., shape.pos_cur] - times[..., shape.pos_prev]
        # rule 6: violation side is micro-second bunching
        out[..., 5] = _sigmoid((gaps - 10.0) / 5.0).mean(axis=-1)
        # rule 7: violation side is silence beyond 10 s
        out[..., 6] = _sigmoid((1e7 - gaps) / 1e6).mean(axis=-1)

    # rule 5: every time field inside its display range
    in_range = np.ones(batch_shape + (shape.n_messages,), dtype=np.float64)
    for name, hi in (("time_hour", 23.0), ("time_minute", 59.0),
                     ("time_second", 59.0), ("time_micro", 999_999.0)):
        v = x[..., COL[name]]
        in_range = in_range * _sigmoid(2.0 * (v + 0.5)) * _sigmoid(2.0 * (hi + 0.5 - v))
    out[..., 4] = in_range.mean(axis=-1)
    return out


def surrogate_gradients(
    x: np.ndarray, shape: WindowShape, h_scale: float = 1.0
) -> np.ndarray:
    """Central-difference gradients of all 8 surrogates, shape (n, 9, 8)."""
    n, nf = x.shape
    steps = FEATURE_STEPS * h_scale
    tiled = np.tile(steps, n)
    bump = np.zeros((n * nf, n, nf), dtype=np.float64)
    rows = np.repeat(np.arange(n), nf)
    cols = np.tile(np.arange(nf), n)
    bump[np.arange(n * nf), rows, cols] = tiled
    probes = np.concatenate([x[None, :, :] + bump, x[None, :, :] - bump], axis=0)
    scores = rule_surrogates(probes, shape)
    grads = (scores[: n * nf] - scores[n * nf:]) / (2.0 * tiled)[:, None]
    return grads.reshape(n, nf, 8)
