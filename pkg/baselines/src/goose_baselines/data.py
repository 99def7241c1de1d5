"""Canonical corpus CSV loading, splitting, and feature encoding.

This package talks to the generator toolkit only through its documented
external interfaces: the corpus CSV layout and the JSON report schema. The
CSV header is fixed:

    window_id,label,time_hour,time_minute,time_second,time_micro,DM,SM,type,
    appid,dataset,goid,stnum,sqnum,data1,data2

with one row per message, windows as contiguous row blocks, and an empty
label meaning unlabeled.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field

import numpy as np

CSV_HEADER = (
    "window_id", "label", "time_hour", "time_minute", "time_second",
    "time_micro", "DM", "SM", "type", "appid", "dataset", "goid",
    "stnum", "sqnum", "data1", "data2",
)

NUMERIC_COLUMNS = (
    "time_hour", "time_minute", "time_second", "time_micro",
    "appid", "stnum", "sqnum", "data1", "data2",
)
CATEGORICAL_COLUMNS = ("DM", "SM", "type", "dataset", "goid")

CLASS_NAMES = (
    "Normal", "DI", "DOS", "RE", "SP-time", "SP-DM", "SP-SM", "SP-type",
    "SP-appid", "SP-dataset", "SP-goid", "PacketLoss", "ZeroDay",
)

FEATURE_DIM = len(NUMERIC_COLUMNS) + len(CATEGORICAL_COLUMNS)  # 14

# Derived per-transition block: log inter-arrival gap, data1/data2 deltas,
# and how many of the six critical fields (appid + the categoricals) changed.
TRANSITION_DIM = 4

# Causal per-step sequence features for the recurrent detector: incoming log
# gap, data1/data2 deviation from the window head, critical-field deviation
# count from the head, and the running min/max log gap. Deviations persist,
# so the final hidden state sees events from any step.
STEP_DIM = 6

_TIME_COLS = (0, 1, 2, 3)     # hour, minute, second, micro
_APPID_COL = 4
_DATA_COLS = (7, 8)


@dataclass
class Window:
    window_id: str
    label: str | None
    numeric: np.ndarray          # (n, 9) float64, raw field values
    categorical: list[tuple[str, ...]]  # n rows of 5 string values

    @property
    def is_anomaly(self) -> bool:
        return self.label is not None and self.label != "Normal"

    def __len__(self) -> int:
        return self.numeric.shape[0]


def load_corpus(path) -> list[Window]:
    """Parse the canonical CSV into windows (contiguous window_id blocks)."""
    windows: list[Window] = []
    current_id = None
    current_label: str | None = None
    num_rows: list[list[float]] = []
    cat_rows: list[tuple[str, ...]] = []

    def close():
        if current_id is not None:
            windows.append(Window(
                window_id=current_id,
                label=current_label,
                numeric=np.array(num_rows, dtype=np.float64),
                categorical=list(cat_rows),
            ))

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected corpus header {header!r}")
        for row in reader:
            if not row:
                continue
            rec = dict(zip(CSV_HEADER, row))
            if rec["label"] and rec["label"] not in CLASS_NAMES:
                raise ValueError(f"{path}: unknown label {rec['label']!r}")
            if rec["window_id"] != current_id:
                close()
                current_id = rec["window_id"]
                current_label = rec["label"] or None
                num_rows, cat_rows = [], []
            num_rows.append([float(rec[c]) for c in NUMERIC_COLUMNS])
            cat_rows.append(tuple(rec[c] for c in CATEGORICAL_COLUMNS))
    close()
    return windows


def corpus_content_hash(path) -> str:
    """The shared label-independent content hash over the corpus CSV.

    Recipe (from the toolkit's report-schema contract): per message, join
    the canonical row with the label field blanked using unit separators
    (0x1f), terminate with a record separator (0x1e), sha256 over the lot.
    """
    digest = hashlib.sha256()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected corpus header {header!r}")
        for row in reader:
            if not row:
                continue
            rec = dict(zip(CSV_HEADER, row))
            rec["label"] = ""
            digest.update(
                "\x1f".join(rec[c] for c in CSV_HEADER).encode("utf-8")
            )
            digest.update(b"\x1e")
    return digest.hexdigest()


@dataclass(frozen=True)
class SplitSpec:
    """Stratified train/test split parameters."""

    train_fraction: float = 0.7
    test_fraction: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if abs(self.train_fraction + self.test_fraction - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")
        if not 0 < self.train_fraction < 1:
            raise ValueError("train fraction must be in (0, 1)")


def stratified_split(windows, spec: SplitSpec):
    """Deterministic per-class split; every class must land in both halves."""
    rng = np.random.default_rng(spec.seed)
    by_label: dict[str | None, list[Window]] = {}
    for w in windows:
        by_label.setdefault(w.label, []).append(w)
    train: list[Window] = []
    test: list[Window] = []
    for label in sorted(by_label, key=lambda v: (v is None, v)):
        group = by_label[label]
        order = rng.permutation(len(group))
        cut = int(round(len(group) * spec.train_fraction))
        if cut == 0 or cut == len(group):
            raise ValueError(
                f"class {label!r} has too few windows ({len(group)}) to appear "
                f"in both splits"
            )
        train.extend(group[i] for i in order[:cut])
        test.extend(group[i] for i in order[cut:])
    return train, test


def _log_gaps(window: Window) -> np.ndarray:
    num = window.numeric
    t_us = ((num[:, 0] * 60 + num[:, 1]) * 60 + num[:, 2]) * 1_000_000 + num[:, 3]
    return np.log1p(np.maximum(np.diff(t_us), 0.0))


def _raw_steps(window: Window) -> np.ndarray:
    """(n, 6) raw causal step rows; gap cells of step 0 are NaN (no gap yet)."""
    n = len(window)
    num = window.numeric
    gaps = _log_gaps(window)
    rows = np.zeros((n, STEP_DIM))
    head_d1, head_d2 = num[0, _DATA_COLS[0]], num[0, _DATA_COLS[1]]
    head_appid = num[0, _APPID_COL]
    head_cats = window.categorical[0]
    for t in range(n):
        if t == 0:
            rows[t, 0] = rows[t, 4] = rows[t, 5] = np.nan
        else:
            rows[t, 0] = gaps[t - 1]
            rows[t, 4] = gaps[:t].min()
            rows[t, 5] = gaps[:t].max()
        rows[t, 1] = abs(num[t, _DATA_COLS[0]] - head_d1)
        rows[t, 2] = abs(num[t, _DATA_COLS[1]] - head_d2)
        rows[t, 3] = float(num[t, _APPID_COL] != head_appid) + sum(
            1 for a, b in zip(window.categorical[t], head_cats) if a != b
        )
    return rows


def _raw_transitions(window: Window) -> np.ndarray:
    """(n-1, 4) raw transition rows for one window (empty for n = 1)."""
    n = len(window)
    if n < 2:
        return np.zeros((0, TRANSITION_DIM))
    num = window.numeric
    rows = np.zeros((n - 1, TRANSITION_DIM))
    rows[:, 0] = _log_gaps(window)
    rows[:, 1] = np.diff(num[:, _DATA_COLS[0]])
    rows[:, 2] = np.diff(num[:, _DATA_COLS[1]])
    appid_changed = (np.diff(num[:, _APPID_COL]) != 0).astype(float)
    cat_changed = np.array([
        sum(1 for a, b in zip(window.categorical[i], window.categorical[i + 1])
            if a != b)
        for i in range(n - 1)
    ], dtype=float)
    rows[:, 3] = appid_changed + cat_changed
    return rows


@dataclass
class FeatureEncoder:
    """Feature encoding fitted on the training split only.

    Per-message vectors: the 9 numeric fields min-max scaled by the
    training range (degenerate ranges become plain offsets, so unseen
    values still register) plus the 5 categorical fields integer-encoded in
    sorted training-vocabulary order; unseen test values share the
    out-of-vocabulary code.

    Per-transition blocks: log1p inter-arrival gap, data1/data2 deltas, and
    the critical-field change count, scaled by training ranges. These are
    what the window-level models consume.
    """

    mins: np.ndarray | None = None
    spans: np.ndarray | None = None
    t_mins: np.ndarray | None = None
    t_spans: np.ndarray | None = None
    t_median: np.ndarray | None = None
    s_fill: float = 0.0
    s_mins: np.ndarray | None = None
    s_spans: np.ndarray | None = None
    vocab: dict[str, dict[str, int]] = field(default_factory=dict)
    fitted: bool = False

    def fit(self, windows) -> "FeatureEncoder":
        stacked = np.vstack([w.numeric for w in windows])
        self.mins = stacked.min(axis=0)
        spans = stacked.max(axis=0) - self.mins
        self.spans = np.where(spans > 0, spans, 1.0)
        transitions = np.vstack(
            [_raw_transitions(w) for w in windows if len(w) > 1]
            or [np.zeros((1, TRANSITION_DIM))]
        )
        self.t_mins = transitions.min(axis=0)
        t_spans = transitions.max(axis=0) - self.t_mins
        self.t_spans = np.where(t_spans > 0, t_spans, 1.0)
        self.t_median = (np.median(transitions, axis=0) - self.t_mins) / self.t_spans
        steps = np.vstack([_raw_steps(w) for w in windows])
        gap_values = steps[:, 0][~np.isnan(steps[:, 0])]
        self.s_fill = float(np.median(gap_values)) if gap_values.size else 0.0
        filled = np.where(np.isnan(steps), self.s_fill, steps)
        self.s_mins = filled.min(axis=0)
        s_spans = filled.max(axis=0) - self.s_mins
        self.s_spans = np.where(s_spans > 0, s_spans, 1.0)
        self.vocab = {}
        for j, column in enumerate(CATEGORICAL_COLUMNS):
            values = sorted({row[j] for w in windows for row in w.categorical})
            self.vocab[column] = {value: i for i, value in enumerate(values)}
        self.fitted = True
        return self

    def _check(self):
        if not self.fitted:
            raise RuntimeError("encoder must be fitted before encoding")

    def encode(self, window: Window) -> np.ndarray:
        """(n, 14) matrix: scaled numerics then categorical codes."""
        self._check()
        numeric = (window.numeric - self.mins) / self.spans
        codes = np.empty((len(window), len(CATEGORICAL_COLUMNS)))
        for j, column in enumerate(CATEGORICAL_COLUMNS):
            mapping = self.vocab[column]
            oov = len(mapping)
            codes[:, j] = [mapping.get(row[j], oov) for row in window.categorical]
        return np.hstack([numeric, codes])

    def encode_transitions(self, window: Window) -> np.ndarray:
        """(n-1, 4) scaled transition blocks."""
        self._check()
        raw = _raw_transitions(window)
        if raw.shape[0] == 0:
            return raw
        return (raw - self.t_mins) / self.t_spans

    def flatten(self, window: Window, length: int = 10) -> np.ndarray:
        """Fixed-size transition vector: the window's first `length - 1`
        transitions; shorter windows padded with the training median block."""
        self._check()
        want = length - 1
        enc = self.encode_transitions(window)
        if enc.shape[0] >= want:
            enc = enc[:want]
        else:
            pad = np.repeat(self.t_median[None, :], want - enc.shape[0], axis=0)
            enc = np.vstack([enc, pad]) if enc.size else pad
        return enc.reshape(-1)

    def sequence(self, window: Window) -> np.ndarray:
        """(n, 6) scaled causal step rows for the recurrent detector.

        Step 0's gap cells carry the training-median log gap (neutral).
        """
        self._check()
        raw = _raw_steps(window)
        filled = np.where(np.isnan(raw), self.s_fill, raw)
        return (filled - self.s_mins) / self.s_spans


def flatten_matrix(encoder: FeatureEncoder, windows, length: int = 10) -> np.ndarray:
    return np.stack([encoder.flatten(w, length) for w in windows])


def binary_labels(windows) -> np.ndarray:
    return np.array([1 if w.is_anomaly else 0 for w in windows], dtype=np.int64)
