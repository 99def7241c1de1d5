"""Secondary acceptance: Table-4 accuracy bands, schema validity, and
interoperability with the primary compare command on the shared corpus."""

import json
import subprocess

import pytest

from goose_baselines.cli import run_model
from goose_baselines.report import write_report
from goose_baselines.schema import validate_report

# Accuracy targets with the +-5-point tolerance.
BANDS = {
    "fnn": (0.874 - 0.05, 0.874 + 0.05),
    "rnn": (0.885 - 0.05, 0.885 + 0.05),
    "ocsvm": (0.874 - 0.05, 0.874 + 0.05),
}


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" -- {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def reports(shared_corpus, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("reports")
    payloads = {}
    for model in ("fnn", "rnn", "ocsvm"):
        payload, _ = run_model(model, shared_corpus, seed=0)
        path = out_dir / f"{model}.json"
        write_report(payload, path)
        payloads[model] = (payload, path)
    return payloads


@pytest.mark.parametrize("model", ["fnn", "rnn", "ocsvm"])
def test_criterion_accuracy_band(reports, model):
    payload, _ = reports[model]
    accuracy = payload["metrics"]["accuracy"]
    lo, hi = BANDS[model]
    _verdict(
        f"{model} binary accuracy within +-5 points of its reference",
        lo <= accuracy <= hi,
        f"accuracy {accuracy:.3f}, band [{lo:.3f}, {hi:.3f}]",
    )


def test_criterion_reports_validate_against_schema(reports):
    for model, (payload, _) in reports.items():
        validate_report(payload)
    _verdict("all emitted reports validate against the shared schema", True,
             "fnn, rnn, ocsvm")


def test_criterion_reports_load_in_primary_compare(reports, tmp_path):
    paths = [str(path) for _, path in reports.values()]
    result = subprocess.run(
        ["goosekit", "compare", *paths, "--out", str(tmp_path / "cmp.json"),
         "--no-figures"],
        capture_output=True, text=True,
    )
    ok = result.returncode == 0
    comparison = {}
    if ok:
        comparison = json.loads((tmp_path / "cmp.json").read_text())
        ok = set(comparison.get("detectors", [])) == {"fnn", "rnn", "ocsvm"}
    _verdict("reports load in the primary compare command", ok,
             f"exit {result.returncode}, detectors {comparison.get('detectors')}")
