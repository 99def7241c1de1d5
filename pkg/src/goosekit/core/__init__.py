from .message import (
    ALL_LABELS,
    CATEGORICAL_FIELDS,
    ClassLabel,
    GooseMessage,
    MessageWindow,
    NUMERIC_FIELDS,
    NUMERIC_RANGES,
    ST_NUM_MAX,
    time_of_day_us,
)
from .rules import (
    CRITICAL_FIELDS,
    RULE_IDS,
    RuleOutcome,
    RuleReport,
    RuleViolation,
    check_rule,
    collect_violations,
    evaluate_rules,
    violation_severity,
)
from .signature import classify_report, classify_window

__all__ = [
    "ALL_LABELS",
    "CATEGORICAL_FIELDS",
    "CRITICAL_FIELDS",
    "ClassLabel",
    "GooseMessage",
    "MessageWindow",
    "NUMERIC_FIELDS",
    "NUMERIC_RANGES",
    "RULE_IDS",
    "RuleOutcome",
    "RuleReport",
    "RuleViolation",
    "ST_NUM_MAX",
    "check_rule",
    "classify_report",
    "classify_window",
    "collect_violations",
    "evaluate_rules",
    "time_of_day_us",
    "violation_severity",
]
