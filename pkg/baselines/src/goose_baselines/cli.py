"""Train-and-evaluate entry point emitting shared-schema reports."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .data import SplitSpec, corpus_content_hash, load_corpus, stratified_split
from .fnn import FnnConfig, FnnDetector
from .ocsvm import OcsvmConfig, OcsvmDetector
from .report import build_report, write_report
from .rnn import RnnConfig, RnnDetector

MODELS = ("fnn", "rnn", "ocsvm")


def _parse_overrides(path) -> dict:
    """Optional `key = value` hyperparameter file."""
    overrides: dict = {}
    if path is None:
        return overrides
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"bad config line: {line!r}")
        key = key.strip()
        raw = value.strip()
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[key] = raw
    return overrides


def build_detector(model: str, seed: int, overrides: dict):
    if model == "fnn":
        return FnnDetector(FnnConfig(seed=seed, **overrides))
    if model == "rnn":
        return RnnDetector(RnnConfig(seed=seed, **overrides))
    if model == "ocsvm":
        return OcsvmDetector(OcsvmConfig(seed=seed, **overrides))
    raise ValueError(f"unknown model {model!r} (choose from {', '.join(MODELS)})")


def run_model(model: str, corpus_path, seed: int = 0, overrides: dict | None = None,
              train_fraction: float = 0.7):
    """Split, train, evaluate; returns (report payload, test windows)."""
    windows = load_corpus(corpus_path)
    labeled = [w for w in windows if w.label is not None]
    if len(labeled) != len(windows):
        raise ValueError("corpus must be fully labeled for training")
    split = SplitSpec(train_fraction=train_fraction,
                      test_fraction=1.0 - train_fraction, seed=seed)
    train, test = stratified_split(windows, split)
    detector = build_detector(model, seed, overrides or {})
    detector.fit(train)
    pred = detector.predict(test)
    payload = build_report(model, corpus_content_hash(corpus_path), test, pred)
    return payload, test


@click.command()
@click.argument("corpus_csv")
@click.option("--model", required=True, help="fnn, rnn, or ocsvm")
@click.option("--seed", default=0, show_default=True)
@click.option("--config", "config_path", default=None,
              help="optional hyperparameter override file")
@click.option("--out", required=True, help="destination report JSON")
@click.option("--train-fraction", default=0.7, show_default=True)
def cli(corpus_csv, model, seed, config_path, out, train_fraction):
    """Train one detector on the corpus and write a shared-schema report."""
    if model not in MODELS:
        click.echo(f"error: unknown model {model!r}", err=True)
        sys.exit(1)
    if not Path(corpus_csv).is_file():
        click.echo(f"error: no such file: {corpus_csv}", err=True)
        sys.exit(1)
    try:
        overrides = _parse_overrides(config_path)
        payload, _ = run_model(model, corpus_csv, seed=seed, overrides=overrides,
                               train_fraction=train_fraction)
    except (ValueError, TypeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    write_report(payload, out)
    metrics = payload["metrics"]
    click.echo(f"{model}: accuracy {metrics['accuracy']:.4f} "
               f"tpr {metrics['tpr']:.4f} fpr {metrics['fpr']:.4f} "
               f"mcc {metrics['mcc']:.4f}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
