"""ML baseline detectors for GOOSE window corpora (shared-report emitters)."""

__version__ = "0.1.0"

from .data import FeatureEncoder, SplitSpec, load_corpus, stratified_split
from .fnn import FnnConfig, FnnDetector
from .ocsvm import OcsvmConfig, OcsvmDetector
from .report import build_report, metrics_from_counts, write_report
from .rnn import RnnConfig, RnnDetector
from .schema import REPORT_SCHEMA, validate_report

__all__ = [
    "FeatureEncoder",
    "FnnConfig",
    "FnnDetector",
    "OcsvmConfig",
    "OcsvmDetector",
    "REPORT_SCHEMA",
    "RnnConfig",
    "RnnDetector",
    "SplitSpec",
    "build_report",
    "load_corpus",
    "metrics_from_counts",
    "stratified_split",
    "validate_report",
    "write_report",
]
