from .config import (
    DEFAULT_RULE_WEIGHTS,
    CategoricalVocab,
    GenerationConfig,
    SeedBank,
    parse_config_file,
)
from .generate import CLASS_TARGET_RULES, ZERO_DAY_VARIANTS, generate_corpus, generate_window
from .multimix import mix_pair, multimix_baseline
from .mutate import base_mutation, categorical_mutation, mutate_value, round_half_away
from .objectives import f_balance, f_novel, f_protocol, mixed_distance
from .perturb import numeric_perturbation, project_numeric
from .surrogates import WindowShape, rule_surrogates, surrogate_gradients, window_numeric

__all__ = [
    "CLASS_TARGET_RULES",
    "DEFAULT_RULE_WEIGHTS",
    "CategoricalVocab",
    "GenerationConfig",
    "SeedBank",
    "WindowShape",
    "ZERO_DAY_VARIANTS",
    "base_mutation",
    "categorical_mutation",
    "f_balance",
    "f_novel",
    "f_protocol",
    "generate_corpus",
    "generate_window",
    "mix_pair",
    "mixed_distance",
    "multimix_baseline",
    "mutate_value",
    "numeric_perturbation",
    "parse_config_file",
    "project_numeric",
    "round_half_away",
    "rule_surrogates",
    "surrogate_gradients",
    "window_numeric",
]
