"""goosekit: GOOSE message dataset generation, validation, and detection."""

__version__ = "0.1.0"

from .core.message import ClassLabel, GooseMessage, MessageWindow
from .core.rules import RuleReport, check_rule, evaluate_rules, violation_severity
from .core.signature import classify_window
from .quality import balance_rate, quality_report, realism_rate_corpus, realism_rate_window

__all__ = [
    "ClassLabel",
    "GooseMessage",
    "MessageWindow",
    "RuleReport",
    "__version__",
    "balance_rate",
    "check_rule",
    "classify_window",
    "evaluate_rules",
    "quality_report",
    "realism_rate_corpus",
    "realism_rate_window",
    "violation_severity",
]
