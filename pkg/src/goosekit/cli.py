"""Command-line entry point wiring the pipeline end to end.

Exit codes: 0 success, 1 usage/config errors, 2 data errors (bad captures,
malformed CSVs, failed generation).
"""

from __future__ import annotations

import dataclasses
import datetime
import json
import sys
from pathlib import Path

import click

from . import __version__
from .aatm.config import CategoricalVocab, SeedBank, parse_config_file
from .aatm.generate import generate_corpus
from .aatm.multimix import multimix_baseline
from .core.signature import classify_window
from .errors import BackendError, CorpusFormatError, FrameDecodeError, GenerationError
from .ingest.corpus_csv import CorpusFile, corpus_hash, export_csv, import_csv
from .ingest.frames import FilterStats, decode_frame, encode_frame, filter_goose
from .ingest.pcap import read_pcap, write_pcap
from .llm.backend import BackendConfig, HttpBackend, MockBackend
from .llm.detector import detect as llm_detect
from .quality import quality_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageFailure(Exception):
    pass


class DataFailure(Exception):
    pass


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageFailure(f"no such file: {path}")
    return p


def _write_manifest(out_path: Path, subcommand: str, inputs: dict, outputs: list,
                    seed=None, config=None, digest=None) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": str(config) if config else None,
        "inputs": {k: str(v) for k, v in inputs.items()},
        "outputs": [str(o) for o in outputs],
        "seed": seed,
        "tool_version": __version__,
        "corpus_hash": digest,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


@click.group()
@click.version_option(version=__version__, prog_name="goosekit")
def cli():
    """GOOSE dataset generation, validation, and detector evaluation."""


@cli.command()
@click.argument("pcap_path")
@click.option("--out", required=True, help="destination corpus CSV")
@click.option("--window-size", default=10, show_default=True,
              help="messages per window; 0 puts everything in one window")
def ingest(pcap_path, out, window_size):
    """Filter GOOSE frames from a pcap and export the canonical CSV."""
    source = _require_file(pcap_path)
    if window_size < 0:
        raise UsageFailure("--window-size must be >= 0")
    stats = FilterStats()
    decode_errors = []
    messages = []
    try:
        frames = list(filter_goose(read_pcap(source), stats))
    except ValueError as exc:
        raise DataFailure(str(exc)) from exc
    for i, frame in enumerate(frames):
        try:
            messages.append(decode_frame(frame))
        except FrameDecodeError as exc:
            decode_errors.append(f"frame {i}: {exc}")
    from .core.message import MessageWindow

    size = window_size or max(len(messages), 1)
    windows = [
        MessageWindow(tuple(messages[i:i + size]), window_id=f"capture-{i // size:05d}")
        for i in range(0, len(messages), size)
    ]
    corpus = CorpusFile(windows=windows, provenance=str(source))
    export_csv(corpus, out)
    digest = corpus_hash(corpus)
    _write_manifest(Path(out), "ingest", {"pcap": source}, [out], digest=digest)
    click.echo(f"{stats.kept} GOOSE frames kept of {stats.seen} "
               f"({stats.truncated} truncated skipped); "
               f"{len(messages)} decoded into {len(windows)} windows")
    if decode_errors:
        for line in decode_errors:
            click.echo(f"decode error: {line}", err=True)
        sys.exit(EXIT_DATA)


@cli.command()
@click.option("--config", "config_path", required=True, help="generation config file")
@click.option("--seeds", "seeds_path", default=None,
              help="optional CSV of compliant seed windows (defaults to built-ins)")
@click.option("--out", required=True, help="destination corpus CSV")
@click.option("--seed", "seed_override", type=int, default=None,
              help="override the config rng seed")
@click.option("--method", default="aatm", show_default=True,
              help="aatm or multimix")
@click.option("--count", default=0, show_default=True,
              help="multimix only: number of windows (defaults to the plan total)")
@click.option("--pcap", "pcap_out", default=None, help="also export frames to a pcap")
@click.option("--figures/--no-figures", default=True, show_default=True)
def generate(config_path, seeds_path, out, seed_override, method, count, pcap_out,
             figures):
    """Synthesize a labeled corpus from the class plan."""
    try:
        config = parse_config_file(_require_file(config_path))
    except (ValueError, KeyError) as exc:
        raise UsageFailure(f"bad config: {exc}") from exc
    if seed_override is not None:
        config = dataclasses.replace(config, rng_seed=seed_override)
    if sum(config.class_plan.values()) <= 0:
        raise UsageFailure("class plan requests no windows")
    vocab = CategoricalVocab.default()
    if seeds_path:
        try:
            seed_corpus = import_csv(_require_file(seeds_path))
            seeds = SeedBank.from_windows(seed_corpus.windows)
        except (CorpusFormatError, ValueError) as exc:
            raise DataFailure(f"bad seeds: {exc}") from exc
    else:
        seeds = SeedBank.default(vocab, window_length=config.window_length)
    try:
        if method == "aatm":
            corpus = generate_corpus(config, seeds, vocab)
        elif method == "multimix":
            total = count or sum(config.class_plan.values())
            corpus = multimix_baseline(seeds, total, config.rng_seed)
        else:
            raise UsageFailure(f"unknown method {method!r} (use aatm or multimix)")
    except GenerationError as exc:
        raise DataFailure(str(exc)) from exc
    export_csv(corpus, out)
    outputs = [out]
    if pcap_out:
        frames = [encode_frame(m) for w in corpus.windows for m in w.messages]
        write_pcap(frames, pcap_out)
        outputs.append(pcap_out)
    if figures:
        from .figures import render_class_distribution

        fig_path = str(Path(out).with_suffix("")) + ".classes.png"
        counts = {label.value: n for label, n in corpus.class_counts().items()}
        render_class_distribution(counts, fig_path)
        outputs.append(fig_path)
    _write_manifest(Path(out), "generate", {"seeds": seeds_path or "builtin"},
                    outputs, seed=config.rng_seed, config=config_path,
                    digest=corpus_hash(corpus))
    click.echo(f"wrote {len(corpus.windows)} windows to {out}")


@cli.command()
@click.argument("csv_path")
@click.option("--out", default=None, help="write the quality report JSON here")
@click.option("--figures/--no-figures", default=True, show_default=True)
def validate(csv_path, out, figures):
    """Score a corpus: balance rate, realism rate, per-rule means."""
    source = _require_file(csv_path)
    try:
        corpus = import_csv(source)
        report = quality_report(corpus.windows)
    except (CorpusFormatError, ValueError) as exc:
        raise DataFailure(str(exc)) from exc
    payload = report.to_dict()
    payload["corpus_hash"] = corpus_hash(corpus)
    text = json.dumps(payload, indent=2, sort_keys=True)
    click.echo(f"balance_rate  {report.balance_rate:.4f}")
    click.echo(f"realism_rate  {report.realism_rate:.4f}")
    click.echo(f"windows       {report.window_count}")
    outputs = []
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        outputs.append(out)
        if figures:
            from .figures import render_quality

            fig_path = str(Path(out).with_suffix("")) + ".quality.png"
            render_quality(report, fig_path)
            outputs.append(fig_path)
        _write_manifest(Path(out), "validate", {"csv": source}, outputs,
                        digest=payload["corpus_hash"])


@cli.command(name="detect")
@click.argument("csv_path")
@click.option("--engine", default="rules", show_default=True, help="rules or llm")
@click.option("--out", required=True, help="destination CSV with predicted labels")
@click.option("--backend-url", default=None, help="chat-completion base URL")
@click.option("--model", default=None, help="backend model name")
@click.option("--mock", "mock_script", default=None,
              help="scripted mock response file (hermetic, no network)")
@click.option("--batch", default=5, show_default=True, help="windows per prompt")
@click.option("--transcript", default=None, help="JSONL transcript log path")
def detect_cmd(csv_path, engine, out, backend_url, model, mock_script, batch,
               transcript):
    """Label a corpus with the rule engine or the dialogue detector."""
    source = _require_file(csv_path)
    try:
        corpus = import_csv(source)
    except CorpusFormatError as exc:
        raise DataFailure(str(exc)) from exc
    if engine == "rules":
        labeled = [w.relabeled(classify_window(w)) for w in corpus.windows]
        unparsed = 0
    elif engine == "llm":
        if mock_script:
            backend = MockBackend(_require_file(mock_script))
        elif backend_url and model:
            backend = HttpBackend(BackendConfig(base_url=backend_url, model=model))
        else:
            raise UsageFailure("llm engine needs --mock or both --backend-url and --model")
        try:
            responses = llm_detect(backend, corpus.windows, batch_limit=batch,
                                   transcript_path=transcript)
        except BackendError as exc:
            raise DataFailure(str(exc)) from exc
        labeled = []
        unparsed = 0
        for window, response in zip(corpus.windows, responses):
            if response.parse_ok and response.label is not None:
                labeled.append(window.relabeled(response.label))
            else:
                unparsed += 1
                labeled.append(window.relabeled(None))
    else:
        raise UsageFailure(f"unknown engine {engine!r} (use rules or llm)")
    predicted = CorpusFile(windows=labeled, provenance=f"detect:{engine}:{source}")
    export_csv(predicted, out)
    _write_manifest(Path(out), "detect", {"csv": source, "engine": engine}, [out],
                    digest=corpus_hash(predicted))
    click.echo(f"labeled {len(labeled)} windows with engine={engine}"
               + (f" ({unparsed} unparsed)" if unparsed else ""))
    if unparsed:
        sys.exit(EXIT_DATA)


@cli.command()
@click.argument("pred_csv")
@click.argument("truth_csv")
@click.option("--out", required=True, help="destination report JSON")
@click.option("--detector", "detector_name", default="rules", show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def evaluate(pred_csv, truth_csv, out, detector_name, figures):
    """Score predicted labels against truth labels (matched by window id)."""
    from .detect.evaluate import evaluate_labels, report_to_dict

    try:
        pred_corpus = import_csv(_require_file(pred_csv))
        truth_corpus = import_csv(_require_file(truth_csv))
    except CorpusFormatError as exc:
        raise DataFailure(str(exc)) from exc
    pred_by_id = {w.window_id: w.label for w in pred_corpus.windows}
    pred, truth = [], []
    for window in truth_corpus.windows:
        if window.label is None:
            raise DataFailure(f"truth window {window.window_id!r} is unlabeled")
        if window.window_id not in pred_by_id:
            raise DataFailure(f"prediction missing for window {window.window_id!r}")
        p = pred_by_id[window.window_id]
        if p is None:
            raise DataFailure(f"prediction for {window.window_id!r} is unlabeled")
        pred.append(p)
        truth.append(window.label)
    result = evaluate_labels(pred, truth, detector=detector_name,
                             corpus_digest=corpus_hash(truth_corpus))
    Path(out).write_text(json.dumps(report_to_dict(result), indent=2, sort_keys=True)
                         + "\n", encoding="utf-8")
    outputs = [out]
    if figures:
        from .figures import render_binary_confusion, render_multiclass_confusion

        stem = str(Path(out).with_suffix(""))
        render_binary_confusion(result.binary, stem + ".binary.png")
        render_multiclass_confusion(result.multiclass, stem + ".multiclass.png")
        outputs += [stem + ".binary.png", stem + ".multiclass.png"]
    _write_manifest(Path(out), "evaluate", {"pred": pred_csv, "truth": truth_csv},
                    outputs, digest=result.report.corpus_hash)
    click.echo(f"accuracy {result.report.accuracy:.4f}  mcc {result.report.mcc:.4f}")


@cli.command()
@click.argument("reports", nargs=-1)
@click.option("--out", default=None, help="write the comparison JSON here")
@click.option("--figures/--no-figures", default=True, show_default=True)
def compare(reports, out, figures):
    """Side-by-side metric table over two or more report files."""
    from .detect.evaluate import compare_reports, read_report

    if len(reports) < 2:
        raise UsageFailure("compare needs at least two report files")
    try:
        loaded = [read_report(_require_file(p)) for p in reports]
    except ValueError as exc:
        raise DataFailure(str(exc)) from exc
    table = compare_reports(loaded)
    click.echo(table.render())
    outputs = []
    if out:
        Path(out).write_text(json.dumps(table.to_dict(), indent=2, sort_keys=True)
                             + "\n", encoding="utf-8")
        outputs.append(out)
        if figures:
            from .figures import render_comparison

            fig_path = str(Path(out).with_suffix("")) + ".comparison.png"
            render_comparison(table, fig_path)
            outputs.append(fig_path)
        _write_manifest(Path(out), "compare", {"reports": ",".join(reports)}, outputs)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except UsageFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except DataFailure as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except ValueError as exc:
        # stray validation failures (bad seeds, malformed values) are
        # configuration problems
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
