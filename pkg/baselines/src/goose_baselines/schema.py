"""The shared detector-report JSON schema (the toolkit's compare format)."""

from __future__ import annotations

import jsonschema

METRIC_NAMES = (
    "tpr", "fpr", "fnr", "precision", "accuracy", "f1",
    "markedness", "informedness", "mcc",
)

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "detector", "corpus_hash", "binary_confusion",
        "multiclass_confusion", "metrics",
    ],
    "additionalProperties": False,
    "properties": {
        "detector": {"type": "string"},
        "corpus_hash": {"type": "string"},
        "binary_confusion": {
            "type": "object",
            "required": ["tp", "fn", "fp", "tn"],
            "additionalProperties": False,
            "properties": {
                name: {"type": "integer", "minimum": 0}
                for name in ("tp", "fn", "fp", "tn")
            },
        },
        "multiclass_confusion": {
            "type": "array",
            "minItems": 13,
            "maxItems": 13,
            "items": {
                "type": "array",
                "minItems": 13,
                "maxItems": 13,
                "items": {"type": "integer", "minimum": 0},
            },
        },
        "metrics": {
            "type": "object",
            "required": list(METRIC_NAMES),
            "additionalProperties": False,
            "properties": {
                name: {"type": "number", "minimum": -1.0, "maximum": 1.0}
                for name in METRIC_NAMES
            },
        },
    },
}


def validate_report(payload: dict) -> None:
    """Raise jsonschema.ValidationError if the payload breaks the contract."""
    jsonschema.validate(payload, REPORT_SCHEMA)
