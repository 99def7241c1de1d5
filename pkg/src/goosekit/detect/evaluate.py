"""Detector evaluation and report comparison (the shared report schema)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..core.message import ALL_LABELS
from ..ingest.corpus_csv import CorpusFile, corpus_hash
from .metrics import (
    LOWER_IS_BETTER,
    METRIC_NAMES,
    BinaryConfusion,
    MetricsReport,
    MulticlassConfusion,
    binary_confusion,
    compute_metrics,
    multiclass_confusion,
)

__all__ = [
    "DetectorResult",
    "evaluate_detector",
    "evaluate_labels",
    "report_to_dict",
    "report_from_dict",
    "write_report",
    "read_report",
    "ComparisonTable",
    "compare_reports",
]


@dataclass(frozen=True)
class DetectorResult:
    report: MetricsReport
    binary: BinaryConfusion
    multiclass: MulticlassConfusion


def evaluate_labels(pred, truth, detector: str = "",
                    corpus_digest: str = "") -> DetectorResult:
    binary = binary_confusion(pred, truth)
    multi = multiclass_confusion(pred, truth)
    report = compute_metrics(binary, detector=detector, corpus_hash=corpus_digest)
    return DetectorResult(report=report, binary=binary, multiclass=multi)


def evaluate_detector(detector, corpus: CorpusFile,
                      name: str = "detector") -> DetectorResult:
    """Run a window -> ClassLabel function over a labeled corpus.

    Raises on unlabeled windows; deterministic for a deterministic detector.
    """
    truth = []
    for window in corpus.windows:
        if window.label is None:
            raise ValueError(f"window {window.window_id!r} carries no truth label")
        truth.append(window.label)
    pred = [detector(w) for w in corpus.windows]
    return evaluate_labels(pred, truth, detector=name, corpus_digest=corpus_hash(corpus))


def report_to_dict(result: DetectorResult) -> dict:
    """Serialize to the shared report schema."""
    return {
        "detector": result.report.source_detector,
        "corpus_hash": result.report.corpus_hash,
        "binary_confusion": result.binary.to_dict(),
        "multiclass_confusion": result.multiclass.to_lists(),
        "metrics": result.report.metrics_dict(),
    }


def report_from_dict(payload: dict) -> DetectorResult:
    """Parse the shared schema back into a DetectorResult."""
    for key in ("detector", "corpus_hash", "binary_confusion",
                "multiclass_confusion", "metrics"):
        if key not in payload:
            raise ValueError(f"report is missing the {key!r} field")
    bc = payload["binary_confusion"]
    binary = BinaryConfusion(tp=int(bc["tp"]), fn=int(bc["fn"]),
                             fp=int(bc["fp"]), tn=int(bc["tn"]))
    rows = payload["multiclass_confusion"]
    if len(rows) != len(ALL_LABELS) or any(len(r) != len(ALL_LABELS) for r in rows):
        raise ValueError("multiclass_confusion must be a 13x13 integer array")
    multi = MulticlassConfusion(tuple(tuple(int(v) for v in row) for row in rows))
    metrics = payload["metrics"]
    missing = [name for name in METRIC_NAMES if name not in metrics]
    if missing:
        raise ValueError(f"metrics block is missing {missing}")
    report = MetricsReport(
        **{name: float(metrics[name]) for name in METRIC_NAMES},
        source_detector=str(payload["detector"]),
        corpus_hash=str(payload["corpus_hash"]),
    )
    return DetectorResult(report=report, binary=binary, multiclass=multi)


def write_report(result: DetectorResult, path) -> None:
    Path(path).write_text(
        json.dumps(report_to_dict(result), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def read_report(path) -> DetectorResult:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class ComparisonTable:
    """Side-by-side metric table with per-metric best-value marking."""

    detectors: tuple[str, ...]
    values: dict[str, tuple[float, ...]]
    best: dict[str, tuple[int, ...]]
    warnings: tuple[str, ...]

    def render(self) -> str:
        width = max(12, *(len(d) + 2 for d in self.detectors))
        lines = ["metric".ljust(14) + "".join(d.rjust(width) for d in self.detectors)]
        for name in METRIC_NAMES:
            row = name.ljust(14)
            for i, value in enumerate(self.values[name]):
                mark = "*" if i in self.best[name] else " "
                row += f"{value:.3f}{mark}".rjust(width)
            lines.append(row)
        lines.extend(f"warning: {w}" for w in self.warnings)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "detectors": list(self.detectors),
            "metrics": {k: list(v) for k, v in self.values.items()},
            "best": {k: list(v) for k, v in self.best.items()},
            "warnings": list(self.warnings),
        }


def compare_reports(results) -> ComparisonTable:
    """Line up >= 2 reports; lower wins for fpr/fnr, higher for the rest.

    Ties mark every tied report, so identical reports have no unique best.
    Reports over different corpus hashes get a warning flag.
    """
    results = list(results)
    if len(results) < 2:
        raise ValueError("comparison needs at least two reports")
    reports = [r.report if isinstance(r, DetectorResult) else r for r in results]
    values = {
        name: tuple(r.metric(name) for r in reports) for name in METRIC_NAMES
    }
    best = {}
    for name, row in values.items():
        target = min(row) if name in LOWER_IS_BETTER else max(row)
        best[name] = tuple(i for i, v in enumerate(row) if v == target)
    warnings = []
    hashes = {r.corpus_hash for r in reports if r.corpus_hash}
    if len(hashes) > 1:
        warnings.append("reports were computed over different corpus hashes")
    return ComparisonTable(
        detectors=tuple(r.source_detector or f"report-{i}" for i, r in enumerate(reports)),
        values=values,
        best=best,
        warnings=tuple(warnings),
    )
