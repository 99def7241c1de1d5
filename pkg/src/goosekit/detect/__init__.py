from ..core.signature import classify_window
from .evaluate import (
    ComparisonTable,
    DetectorResult,
    compare_reports,
    evaluate_detector,
    evaluate_labels,
    read_report,
    report_from_dict,
    report_to_dict,
    write_report,
)
from .metrics import (
    LOWER_IS_BETTER,
    METRIC_NAMES,
    BinaryConfusion,
    MetricsReport,
    MulticlassConfusion,
    advanced_metrics,
    binary_confusion,
    compute_metrics,
    confusion,
    multiclass_confusion,
    standard_metrics,
)

__all__ = [
    "BinaryConfusion",
    "ComparisonTable",
    "DetectorResult",
    "LOWER_IS_BETTER",
    "METRIC_NAMES",
    "MetricsReport",
    "MulticlassConfusion",
    "advanced_metrics",
    "binary_confusion",
    "classify_window",
    "compare_reports",
    "compute_metrics",
    "confusion",
    "evaluate_detector",
    "evaluate_labels",
    "multiclass_confusion",
    "read_report",
    "report_from_dict",
    "report_to_dict",
    "standard_metrics",
    "write_report",
]
