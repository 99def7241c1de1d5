"""Labeled window synthesis.

Each window starts from a compliant seed template, gets the objective-guided
numeric perturbation and categorical mutation applied, is re-normalized onto
a compliant scaffold, and finally has the target class's violation pattern
imposed. Every emitted window is re-verified: its rule signature must
classify back to the requested label, otherwise the attempt is retried and
eventually fails loudly.
"""

from __future__ import annotations

import numpy as np

from ..core.message import (
    ALL_LABELS,
    CATEGORICAL_FIELDS,
    ClassLabel,
    GooseMessage,
    MessageWindow,
)
from ..core.rules import evaluate_rules
from ..core.signature import classify_report
from ..errors import GenerationError
from ..ingest.corpus_csv import CorpusFile
from .config import CategoricalVocab, GenerationConfig, SeedBank
from .mutate import base_mutation, mutate_value, round_half_away
from .objectives import FEATURE_SPANS
from .perturb import numeric_perturbation, project_numeric
from .surrogates import COL, window_numeric

__all__ = ["CLASS_TARGET_RULES", "ZERO_DAY_VARIANTS", "generate_window", "generate_corpus"]

CLASS_TARGET_RULES = {
    ClassLabel.NORMAL: frozenset(),
    ClassLabel.DI: frozenset({2}),
    ClassLabel.DOS: frozenset({6}),
    ClassLabel.RE: frozenset({8}),
    ClassLabel.SP_TIME: frozenset({7}),
    ClassLabel.SP_DM: frozenset({4}),
    ClassLabel.SP_SM: frozenset({4}),
    ClassLabel.SP_TYPE: frozenset({4}),
    ClassLabel.SP_APPID: frozenset({4}),
    ClassLabel.SP_DATASET: frozenset({4}),
    ClassLabel.SP_GOID: frozenset({4}),
    ClassLabel.PACKET_LOSS: frozenset({1}),
}

# Violation combinations that match no known class signature.
ZERO_DAY_VARIANTS = (
    ("st_drop", frozenset({3})),
    ("sq_repeat", frozenset({1})),
    ("double_field", frozenset({4})),
    ("di_gap", frozenset({2, 7})),
    ("burst_gap", frozenset({6, 7})),
)

_SPOOF_FIELD = {
    ClassLabel.SP_DM: "dm",
    ClassLabel.SP_SM: "sm",
    ClassLabel.SP_TYPE: "eth_type",
    ClassLabel.SP_DATASET: "dataset_name",
    ClassLabel.SP_GOID: "goid",
}

_NORMAL_GAP_LO = 200_000      # us
_NORMAL_GAP_HI = 2_000_000
_START_US_MAX = 82_000_000_000  # 22h46m, leaves slack before midnight
_DENSE_RUN = 12               # burst length for DOS windows


class _RecipeMiss(Exception):
    """Internal: the mutation landed on an identity; retry the attempt."""


class _Scaffold:
    """Mutable window-in-progress: parallel per-message field lists."""

    def __init__(self, length: int, start_us: int, gaps_us: list[int], sq0: int,
                 st0: int, appid: int, data1: int, data2: int, cats: dict[str, str]):
        self.length = length
        self.start_us = start_us
        self.gaps_us = gaps_us
        self.sq = [sq0 + i for i in range(length)]
        self.st = [st0] * length
        self.appid = [appid] * length
        self.data1 = [data1] * length
        self.data2 = [data2] * length
        self.cats = [dict(cats) for _ in range(length)]

    def freeze_sq(self, k: int) -> None:
        for i in range(k, self.length):
            self.sq[i] -= 1

    def skip_sq(self, k: int, skip: int) -> None:
        for i in range(k, self.length):
            self.sq[i] += skip - 1

    def flip_data(self, k: int, field: str) -> None:
        values = getattr(self, field)
        for i in range(k, self.length):
            values[i] = 1 - values[i]

    def build(self, window_id: str, label: ClassLabel) -> MessageWindow:
        messages = []
        t = self.start_us
        for i in range(self.length):
            if i > 0:
                t += self.gaps_us[i - 1]
            messages.append(
                GooseMessage(
                    time_hour=int(t // 3_600_000_000) % 24,
                    time_minute=int(t // 60_000_000) % 60,
                    time_second=int(t // 1_000_000) % 60,
                    time_micro=int(t % 1_000_000),
                    dm=self.cats[i]["dm"],
                    sm=self.cats[i]["sm"],
                    eth_type=self.cats[i]["eth_type"],
                    appid=self.appid[i],
                    dataset_name=self.cats[i]["dataset_name"],
                    goid=self.cats[i]["goid"],
                    st_num=self.st[i],
                    sq_num=self.sq[i],
                    data1=self.data1[i],
                    data2=self.data2[i],
                )
            )
        return MessageWindow(tuple(messages), window_id=window_id, label=label)


def _window_length_for(target: ClassLabel, variant: str | None, base: int) -> int:
    if target is ClassLabel.DOS:
        return max(base, _DENSE_RUN)
    if variant == "burst_gap":
        return max(base, 13)
    return base


def _scaffold(seed: MessageWindow, xp: np.ndarray, length: int,
              rng: np.random.Generator) -> _Scaffold:
    """Re-normalize projected numerics onto a fully compliant scaffold."""
    row0 = xp[0]
    base_t = (
        (int(row0[COL["time_hour"]]) * 60 + int(row0[COL["time_minute"]])) * 60
        + int(row0[COL["time_second"]])
    ) * 1_000_000 + int(row0[COL["time_micro"]])
    start_us = (base_t + int(rng.integers(0, 12 * 3600)) * 1_000_000) % _START_US_MAX

    times = (
        (xp[:, COL["time_hour"]] * 60 + xp[:, COL["time_minute"]]) * 60
        + xp[:, COL["time_second"]]
    ) * 1_000_000 + xp[:, COL["time_micro"]]
    gaps = []
    for i in range(length - 1):
        if i < len(times) - 1:
            base_gap = int(abs(int(times[i + 1]) - int(times[i])))
        else:
            base_gap = int(rng.integers(_NORMAL_GAP_LO, _NORMAL_GAP_HI + 1))
        jitter = int(rng.integers(-300_000, 300_001))
        gaps.append(int(np.clip(base_gap + jitter, _NORMAL_GAP_LO, _NORMAL_GAP_HI)))

    sq0 = (int(row0[COL["sq_num"]]) + int(rng.integers(0, 5000))) % 100_000
    st0 = 10 + (int(row0[COL["st_num"]]) + int(rng.integers(0, 500))) % 1_000_000
    cats = {f: getattr(seed.messages[0], f) for f in CATEGORICAL_FIELDS}
    return _Scaffold(
        length=length,
        start_us=start_us,
        gaps_us=gaps,
        sq0=sq0,
        st0=st0,
        appid=int(row0[COL["appid"]]),
        data1=int(row0[COL["data1"]]),
        data2=int(row0[COL["data2"]]),
        cats=cats,
    )


def _targeted_mutation(scaffold: _Scaffold, k: int, field: str,
                       config: GenerationConfig, vocab: CategoricalVocab,
                       rng: np.random.Generator) -> None:
    """Mutate one categorical field from position k onward via the
    transition-matrix machinery; identity moves miss the target class."""
    m = base_mutation(config, rng)[field] - config.lambda_violation * vocab.shift({4}, field)
    old = scaffold.cats[k][field]
    if round_half_away(m) % len(vocab.values[field]) == 0:
        raise _RecipeMiss(field)
    new = mutate_value(vocab, field, old, m)
    for i in range(k, scaffold.length):
        scaffold.cats[i][field] = new


def _apply_recipe(scaffold: _Scaffold, target: ClassLabel, variant: str | None,
                  config: GenerationConfig, vocab: CategoricalVocab,
                  rng: np.random.Generator) -> None:
    length = scaffold.length
    k = int(rng.integers(1, length))

    if target is ClassLabel.NORMAL:
        return
    if target is ClassLabel.DI:
        scaffold.flip_data(k, "data1" if rng.integers(0, 2) == 0 else "data2")
    elif target is ClassLabel.RE:
        scaffold.flip_data(k, "data1" if rng.integers(0, 2) == 0 else "data2")
        scaffold.freeze_sq(k)
    elif target is ClassLabel.DOS:
        scaffold.gaps_us = [int(rng.integers(1, 9)) for _ in range(length - 1)]
    elif target is ClassLabel.SP_TIME:
        scaffold.gaps_us[k - 1] = int((10.5 + rng.uniform(0.0, 29.5)) * 1e6)
    elif target is ClassLabel.SP_APPID:
        bump = int(rng.integers(1, 10))
        new = scaffold.appid[k] + bump
        if new > 0xFFFF:
            new = scaffold.appid[k] - bump
        for i in range(k, length):
            scaffold.appid[i] = new
    elif target in _SPOOF_FIELD:
        _targeted_mutation(scaffold, k, _SPOOF_FIELD[target], config, vocab, rng)
    elif target is ClassLabel.PACKET_LOSS:
        scaffold.skip_sq(k, int(rng.integers(2, 6)))
    elif target is ClassLabel.ZERO_DAY:
        if variant == "st_drop":
            drop = int(rng.integers(1, 6))
            for i in range(k, length):
                scaffold.st[i] -= drop
        elif variant == "sq_repeat":
            scaffold.freeze_sq(k)
        elif variant == "double_field":
            _targeted_mutation(scaffold, k, "dm", config, vocab, rng)
            _targeted_mutation(scaffold, k, "sm", config, vocab, rng)
        elif variant == "di_gap":
            scaffold.flip_data(k, "data1")
            k2 = int(rng.integers(1, length))
            scaffold.gaps_us[k2 - 1] = int((10.5 + rng.uniform(0.0, 29.5)) * 1e6)
        elif variant == "burst_gap":
            for i in range(11):
                scaffold.gaps_us[i] = int(rng.integers(1, 9))
            scaffold.gaps_us[11] = int((10.5 + rng.uniform(0.0, 29.5)) * 1e6)
        else:
            raise ValueError(f"unknown zero-day variant {variant!r}")
    else:
        raise ValueError(f"no recipe for class {target}")


def generate_window(
    seed: MessageWindow,
    target_class: ClassLabel,
    config: GenerationConfig,
    vocab: CategoricalVocab,
    corpus=None,
    *,
    stream_key: int = 0,
    window_id: str = "generated",
) -> MessageWindow:
    """Synthesize one labeled window whose rule signature matches the class.

    Deterministic given (config.rng_seed, stream_key). Raises GenerationError
    when the retry budget is exhausted without hitting the target signature.
    """
    for attempt in range(config.retry_budget):
        rng = np.random.Generator(
            np.random.PCG64(
                np.random.SeedSequence(config.rng_seed, spawn_key=(stream_key, attempt))
            )
        )
        if target_class is ClassLabel.ZERO_DAY:
            variant, rules = ZERO_DAY_VARIANTS[int(rng.integers(0, len(ZERO_DAY_VARIANTS)))]
        else:
            variant, rules = None, CLASS_TARGET_RULES[target_class]
        cfg = config.with_targets(rules)
        delta = numeric_perturbation(seed, cfg, corpus_state=None, corpus=corpus)
        xp = project_numeric(window_numeric(seed) + delta)
        length = _window_length_for(target_class, variant, config.window_length)
        scaffold = _scaffold(seed, xp, length, rng)
        try:
            _apply_recipe(scaffold, target_class, variant, cfg, vocab, rng)
        except _RecipeMiss:
            continue
        window = scaffold.build(window_id, target_class)
        report = evaluate_rules(window)
        if classify_report(report) == target_class:
            return window
    raise GenerationError(target_class.value, config.retry_budget)


class _NoveltyPool:
    """Corpus cache for fast nearest-window lookups during generation."""

    def __init__(self):
        self._by_len: dict[int, dict] = {}
        self._codes: dict[str, int] = {}

    def _encode_cats(self, window: MessageWindow) -> np.ndarray:
        rows = []
        for msg in window.messages:
            row = []
            for f in CATEGORICAL_FIELDS:
                value = getattr(msg, f)
                row.append(self._codes.setdefault(value, len(self._codes)))
            rows.append(row)
        return np.array(rows, dtype=np.int64)

    def add(self, window: MessageWindow) -> None:
        group = self._by_len.setdefault(
            len(window.messages), {"num": [], "cat": [], "stack": None}
        )
        group["num"].append(window_numeric(window))
        group["cat"].append(self._encode_cats(window))
        group["stack"] = None

    def __len__(self) -> int:
        return sum(len(g["num"]) for g in self._by_len.values())

    def nearest_numeric(self, window: MessageWindow):
        """(numeric matrix, aligned length) of the nearest pooled window."""
        if not len(self):
            raise ValueError("novelty pool is empty")
        cand_num = window_numeric(window)
        cand_cat = self._encode_cats(window)
        spans = np.asarray(FEATURE_SPANS)
        best = (np.inf, None, 0)
        for length, group in self._by_len.items():
            if group["stack"] is None:
                group["stack"] = (np.stack(group["num"]), np.stack(group["cat"]))
            nums, cats = group["stack"]
            aligned = min(len(window.messages), length)
            numeric_part = (
                np.abs(nums[:, :aligned, :] - cand_num[None, :aligned, :]) / spans
            ).sum(axis=(1, 2))
            cat_part = (cats[:, :aligned, :] != cand_cat[None, :aligned, :]).sum(axis=(1, 2))
            dist = (numeric_part + cat_part) / (14.0 * aligned)
            idx = int(np.argmin(dist))
            if dist[idx] < best[0]:
                best = (float(dist[idx]), nums[idx], aligned)
        return best[1], best[2]


def generate_corpus(config: GenerationConfig, seeds: SeedBank,
                    vocab: CategoricalVocab) -> CorpusFile:
    """Produce a corpus matching the class plan exactly.

    The next class to synthesize is always the most under-represented one
    relative to its planned share. Deterministic for a fixed rng_seed.
    """
    plan = {label: n for label, n in config.class_plan.items() if n > 0}
    if not plan:
        raise ValueError("class plan requests no windows")
    produced = {label: 0 for label in plan}
    pool = _NoveltyPool()
    for template in seeds.templates:
        pool.add(template)
    windows: list[MessageWindow] = []
    index = 0
    order = {label: i for i, label in enumerate(ALL_LABELS)}
    while any(produced[label] < plan[label] for label in plan):
        pending = [label for label in plan if produced[label] < plan[label]]
        label = min(pending, key=lambda l: (produced[l] / plan[l], order[l]))
        seed = seeds.templates[index % len(seeds.templates)]
        window = generate_window(
            seed, label, config, vocab, corpus=pool,
            stream_key=index, window_id=f"{label.value}-{produced[label]:04d}",
        )
        windows.append(window)
        pool.add(window)
        produced[label] += 1
        index += 1
    return CorpusFile(windows=windows, provenance=f"aatm:seed={config.rng_seed}")
