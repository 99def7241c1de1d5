"""Generator configuration, categorical vocabularies, and seed templates."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from ..core.message import (
    ALL_LABELS,
    CATEGORICAL_FIELDS,
    ClassLabel,
    GooseMessage,
    MessageWindow,
)
from ..core.rules import RULE_IDS, evaluate_rules

__all__ = [
    "DEFAULT_RULE_WEIGHTS",
    "GenerationConfig",
    "CategoricalVocab",
    "SeedBank",
    "parse_config_file",
]

# Priority-banded defaults, normalized to sum 1: sequence/state rules highest,
# timestamp format next, identifier and timing rules at the medium band.
DEFAULT_RULE_WEIGHTS = (0.175, 0.10, 0.175, 0.10, 0.15, 0.10, 0.10, 0.10)


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs for the perturbation/mutation generator."""

    alpha: float = 0.4
    beta: float = 0.3
    gamma: float = 0.3
    lambda_violation: float = 1.0
    rule_weights: tuple[float, ...] = DEFAULT_RULE_WEIGHTS
    target_rules: frozenset[int] = frozenset()
    class_plan: dict[ClassLabel, int] = field(default_factory=dict)
    window_length: int = 10
    rng_seed: int = 0
    retry_budget: int = 32

    def __post_init__(self):
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-9:
            raise ValueError("alpha + beta + gamma must sum to 1")
        if self.lambda_violation < 0:
            raise ValueError("lambda_violation must be >= 0")
        if len(self.rule_weights) != 8:
            raise ValueError("rule_weights needs one weight per rule")
        if not all(0 < w < 2 for w in self.rule_weights):
            raise ValueError("rule weights must lie in (0, 2)")
        if not set(self.target_rules) <= set(RULE_IDS):
            raise ValueError(f"target_rules outside 1..8: {sorted(self.target_rules)}")
        if self.window_length < 2:
            raise ValueError("window_length must be >= 2")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")
        if self.retry_budget < 1:
            raise ValueError("retry_budget must be >= 1")
        if any(n < 0 for n in self.class_plan.values()):
            raise ValueError("class plan counts must be >= 0")

    def with_targets(self, rules) -> "GenerationConfig":
        return replace(self, target_rules=frozenset(rules))


@dataclass(frozen=True)
class CategoricalVocab:
    """Ordered value sets per categorical feature plus the transition matrix.

    transition[rule][feature] states how strongly mutating that feature
    drives the rule toward its anomaly pattern (index shift magnitude).
    """

    values: dict[str, tuple[str, ...]]
    transition: dict[int, dict[str, float]]

    def __post_init__(self):
        for feature in CATEGORICAL_FIELDS:
            vals = self.values.get(feature)
            if not vals:
                raise ValueError(f"vocabulary for {feature!r} is empty")
            if len(set(vals)) != len(vals):
                raise ValueError(f"vocabulary for {feature!r} has duplicate values")

    def index(self, feature: str, value: str) -> int:
        try:
            return self.values[feature].index(value)
        except ValueError:
            raise ValueError(
                f"value {value!r} not in the {feature} vocabulary"
            ) from None

    def shift(self, rule_ids, feature: str) -> float:
        return sum(self.transition.get(r, {}).get(feature, 0.0) for r in rule_ids)

    @classmethod
    def default(cls) -> "CategoricalVocab":
        values = {
            "dm": ("01 00 03", "01 00 04", "01 00 05"),
            "sm": ("27 34 31", "27 34 32", "27 34 33"),
            "eth_type": ("88b8", "88b9", "88ba"),
            "dataset_name": (
                "SEL_421_1CFG/LLN0$Goose",
                "SEL_421_2CFG/LLN0$Goose",
                "SEL_421_3CFG/LLN0$Goose",
            ),
            "goid": ("SEL_421_1", "SEL_421_2", "SEL_421_3"),
        }
        # Mutating any critical categorical field trips the field-integrity rule.
        transition = {4: {f: 1.0 for f in CATEGORICAL_FIELDS}}
        return cls(values=values, transition=transition)


def _template(vocab: CategoricalVocab, profile: int, length: int) -> MessageWindow:
    cats = {
        feature: vocab.values[feature][profile % len(vocab.values[feature])]
        for feature in CATEGORICAL_FIELDS
    }
    # every profile speaks actual GOOSE; non-canonical frame types exist in
    # the vocabulary only as SP-type mutation targets
    cats["eth_type"] = vocab.values["eth_type"][0]
    messages = []
    start_us = ((10 * 60 + 15 * profile % 60) * 60) * 1_000_000
    for i in range(length):
        t = start_us + i * 1_000_000
        messages.append(
            GooseMessage(
                time_hour=(t // 3_600_000_000) % 24,
                time_minute=(t // 60_000_000) % 60,
                time_second=(t // 1_000_000) % 60,
                time_micro=t % 1_000_000,
                dm=cats["dm"],
                sm=cats["sm"],
                eth_type=cats["eth_type"],
                appid=3,
                dataset_name=cats["dataset_name"],
                goid=cats["goid"],
                st_num=27 + profile,
                sq_num=150 + 25 * profile + i,
                data1=profile % 2,
                data2=0,
            )
        )
    return MessageWindow(tuple(messages), window_id=f"template-{profile}")


@dataclass(frozen=True)
class SeedBank:
    """Compliant template windows, one comparison chain per (dm, sm) profile."""

    templates: tuple[MessageWindow, ...]

    def __post_init__(self):
        if not self.templates:
            raise ValueError("seed bank needs at least one template")
        for t in self.templates:
            report = evaluate_rules(t)
            if not report.all_compliant:
                raise ValueError(
                    f"seed template {t.window_id!r} violates rules "
                    f"{sorted(report.violated_rules)}"
                )

    @classmethod
    def default(cls, vocab: CategoricalVocab | None = None, window_length: int = 10,
                profiles: int = 3) -> "SeedBank":
        vocab = vocab or CategoricalVocab.default()
        return cls(tuple(_template(vocab, p, window_length) for p in range(profiles)))

    @classmethod
    def from_windows(cls, windows) -> "SeedBank":
        compliant = tuple(w for w in windows if evaluate_rules(w).all_compliant)
        if not compliant:
            raise ValueError("no fully compliant windows to seed from")
        return cls(compliant)


def _parse_plan(raw: str) -> dict[ClassLabel, int]:
    plan: dict[ClassLabel, int] = {}
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, count = chunk.partition(":")
        plan[ClassLabel.from_name(name.strip())] = int(count)
    return plan


def parse_config_file(path) -> GenerationConfig:
    """Parse a `key = value` config file mirroring GenerationConfig fields.

    Supported keys: alpha, beta, gamma, lambda_violation, rule_weights
    (8 comma-separated floats), target_rules (comma-separated rule ids),
    class_plan (`Label:count` pairs), window_length, rng_seed, retry_budget.
    `uniform_plan = N` expands to N windows for every one of the 13 classes.
    """
    kwargs: dict = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{line_no}: expected `key = value`")
        key, value = key.strip(), value.strip()
        if key in ("alpha", "beta", "gamma", "lambda_violation"):
            kwargs[key] = float(value)
        elif key == "rule_weights":
            kwargs[key] = tuple(float(x) for x in value.split(","))
        elif key == "target_rules":
            kwargs[key] = frozenset(int(x) for x in value.split(",") if x.strip())
        elif key == "class_plan":
            kwargs[key] = _parse_plan(value)
        elif key == "uniform_plan":
            kwargs["class_plan"] = {label: int(value) for label in ALL_LABELS}
        elif key in ("window_length", "rng_seed", "retry_budget"):
            kwargs[key] = int(value)
        else:
            raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
    return GenerationConfig(**kwargs)
