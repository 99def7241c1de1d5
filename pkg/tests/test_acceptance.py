"""Acceptance criteria, one test per criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import time

import numpy as np
import pytest

from goosekit.aatm.config import GenerationConfig, SeedBank
from goosekit.aatm.generate import generate_corpus, generate_window
from goosekit.aatm.multimix import multimix_baseline
from goosekit.core.message import (
    ALL_LABELS,
    ClassLabel,
    GooseMessage,
    MessageWindow,
    ST_NUM_MAX,
)
from goosekit.core.rules import check_rule
from goosekit.core.signature import classify_window
from goosekit.detect.evaluate import compare_reports, evaluate_detector
from goosekit.detect.metrics import BinaryConfusion, METRIC_NAMES, compute_metrics
from goosekit.ingest.corpus_csv import CorpusFile, export_csv, import_csv
from goosekit.ingest.frames import decode_frame, encode_frame, filter_goose
from goosekit.ingest.pcap import read_pcap, write_pcap
from goosekit.llm.backend import MockBackend
from goosekit.llm.detector import detect as llm_detect
from goosekit.quality import balance_rate, realism_rate_corpus

from conftest import message_at, periodic_window, window_of
from test_metrics import TABLE4, _fixture_report

US = 1_000_000
H10 = 10 * 3600 * US


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" -- {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


# =====================================================================
# Criterion 1: rule engine conformance on 24 hand-built windows
# =====================================================================

def _rule_fixtures():
    """3 windows per rule: compliant, minimal violation, boundary."""
    seq = lambda *sqs: window_of(*(message_at(H10 + i * US, sq_num=s)
                                   for i, s in enumerate(sqs)))
    fx = []
    # rule 1
    fx += [
        (1, seq(150, 151, 152), True, 0.0),
        (1, seq(155, 155), False, 1.0),
        (1, window_of(message_at(H10, sq_num=42)), True, 0.0),  # needs a pair
    ]
    # rule 2
    fx += [
        (2, window_of(message_at(H10, data1=0, st_num=27, sq_num=150),
                      message_at(H10 + US, data1=1, st_num=28, sq_num=151)),
         True, 0.0),
        (2, window_of(message_at(H10, data1=0, st_num=27, sq_num=150),
                      message_at(H10 + US, data1=1, st_num=27, sq_num=151)),
         False, 1.0),
        (2, window_of(message_at(H10, data1=0, st_num=27, sq_num=150),
                      message_at(H10 + US, data1=1, st_num=27, sq_num=150)),
         True, 0.0),  # frozen sq_num is the replay rule's pattern, not this one
    ]
    # rule 3
    fx += [
        (3, window_of(message_at(H10, st_num=27, sq_num=150),
                      message_at(H10 + US, st_num=27, sq_num=151),
                      message_at(H10 + 2 * US, st_num=28, sq_num=152)),
         True, 0.0),
        (3, window_of(message_at(H10, st_num=27, sq_num=150),
                      message_at(H10 + US, st_num=26, sq_num=151)),
         False, 1.0),
        (3, window_of(message_at(H10, st_num=ST_NUM_MAX, sq_num=150),
                      message_at(H10 + US, st_num=0, sq_num=151)),
         True, 0.0),  # rollover at 2^32-1 -> 0
    ]
    # rule 4
    fx += [
        (4, periodic_window(n=3), True, 0.0),
        (4, window_of(message_at(H10, sq_num=150),
                      message_at(H10 + US, sq_num=151, goid="SEL_421_2")),
         False, 1 / 6),
        (4, window_of(message_at(H10, sq_num=150),
                      message_at(H10 + US, sq_num=151, goid="SEL_421_2", appid=9)),
         False, 2 / 6),
    ]
    # rule 5
    fx += [
        (5, periodic_window(n=2), True, 0.0),
        (5, window_of(message_at(H10).with_fields(time_minute=75)), False, 1.0),
        (5, window_of(message_at(H10).with_fields(time_micro=999_999)), True, 0.0),
    ]
    # rule 6
    fx += [
        (6, periodic_window(n=12, gap_us=11), True, 0.0),
        (6, periodic_window(n=12, gap_us=8), False, 0.2),
        # inclusive threshold: exactly 10 messages at exactly 10 us gaps match
        # the burst pattern while the count-based severity sits at 0
        (6, periodic_window(n=10, gap_us=10), False, 0.0),
    ]
    # rule 7
    fx += [
        (7, periodic_window(n=3, gap_us=1_000_000), True, 0.0),
        (7, window_of(message_at(H10, sq_num=150),
                      message_at(H10 + 25 * US, sq_num=151)), False, 0.5),
        (7, window_of(message_at(H10, sq_num=150),
                      message_at(H10 + 10 * US, sq_num=151)), True, 0.0),
    ]
    # rule 8
    fx += [
        (8, window_of(message_at(H10, data1=0, sq_num=150),
                      message_at(H10 + US, data1=1, sq_num=151)), True, 0.0),
        (8, window_of(message_at(H10, data1=0, sq_num=150),
                      message_at(H10 + US, data1=1, sq_num=150)), False, 1.0),
        (8, window_of(message_at(H10, data1=0, sq_num=150),
                      message_at(H10 + US, data1=0, sq_num=150)), True, 0.0),
    ]
    return fx


def test_criterion_rule_engine_conformance():
    fixtures = _rule_fixtures()
    assert len(fixtures) == 24
    start = time.perf_counter()
    failures = []
    for i, (rule_id, window, want_compliant, want_severity) in enumerate(fixtures):
        compliant, severity, _ = check_rule(rule_id, window)
        if compliant != want_compliant or abs(severity - want_severity) > 1e-12:
            failures.append(
                f"fixture {i} (rule {rule_id}): got ({compliant}, {severity}), "
                f"want ({want_compliant}, {want_severity})"
            )
    elapsed = time.perf_counter() - start
    _verdict(
        "rule engine conformance (24 fixtures, incl. rollover and burst threshold)",
        not failures and elapsed < 1.0,
        "; ".join(failures) or f"{elapsed * 1000:.1f} ms",
    )


# =====================================================================
# Criterion 2: metric oracle equivalence over all cells in [0, 20]
# =====================================================================

def test_criterion_metric_oracle_equivalence():
    start = time.perf_counter()
    grid = np.arange(21)
    tp, fn, fp, tn = (a.ravel().astype(np.float64)
                      for a in np.meshgrid(grid, grid, grid, grid, indexing="ij"))
    total = tp + fn + fp + tn
    with np.errstate(divide="ignore", invalid="ignore"):
        def div(num, den):
            out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
            return out

        o_tpr = div(tp, tp + fn)
        o_fpr = div(fp, fp + tn)
        o_fnr = div(fn, fn + tp)
        o_prec = div(tp, tp + fp)
        o_acc = div(tp + tn, total)
        o_f1 = div(2 * o_prec * o_tpr, o_prec + o_tpr)
        o_mark = o_prec + div(tn, tn + fn) - 1.0
        o_info = o_tpr + div(tn, tn + fp) - 1.0
        denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
        o_mcc = np.where(denom > 0,
                         (tp * tn - fp * fn) / np.sqrt(np.where(denom > 0, denom, 1.0)),
                         0.0)
    oracle = dict(tpr=o_tpr, fpr=o_fpr, fnr=o_fnr, precision=o_prec, accuracy=o_acc,
                  f1=o_f1, markedness=o_mark, informedness=o_info, mcc=o_mcc)

    checked = 0
    worst = 0.0
    cases = zip(tp.astype(int), fn.astype(int), fp.astype(int), tn.astype(int))
    for idx, (a, b, c, d) in enumerate(cases):
        if a + b + c + d == 0:
            with pytest.raises(ValueError):
                compute_metrics(BinaryConfusion(a, b, c, d))
            continue
        report = compute_metrics(BinaryConfusion(a, b, c, d))
        for name in METRIC_NAMES:
            err = abs(report.metric(name) - oracle[name][idx])
            if err > worst:
                worst = err
            assert err < 1e-12, (a, b, c, d, name)
        checked += 1

    # the all-ones sanity row
    perfect = compute_metrics(BinaryConfusion(20, 0, 0, 20))
    assert all(perfect.metric(m) == 1.0 for m in
               ("tpr", "precision", "accuracy", "f1", "markedness", "informedness", "mcc"))
    elapsed = time.perf_counter() - start
    _verdict(
        "metric oracle equivalence (194,481 matrices, tol 1e-12, < 10 s)",
        checked == 21**4 - 1 and elapsed < 10.0,
        f"{checked + 1} cases, worst |err| {worst:.2e}, {elapsed:.2f} s",
    )


# =====================================================================
# Criterion 3: BR/RR formula checks
# =====================================================================

def test_criterion_balance_and_realism_formulas():
    cgan = dict(zip(ALL_LABELS,
                    (961, 712, 789, 403, 111, 277, 311, 233, 424, 193, 219, 206, 161)))
    aatm = dict(zip(ALL_LABELS,
                    (350, 401, 419, 396, 334, 348, 325, 430, 349, 348, 428, 331, 541)))
    br_cgan = balance_rate(cgan)
    br_aatm = balance_rate(aatm)
    uniform = balance_rate({label: 100 for label in ALL_LABELS})
    compliant_rr = realism_rate_corpus(
        [periodic_window(window_id=f"w{i}", sq0=10 * i) for i in range(20)]
    )
    ok = (
        abs(br_cgan - 0.519) < 1e-3
        and abs(br_aatm - 0.799) < 1e-3
        and uniform == pytest.approx(1.0, abs=1e-12)
        and compliant_rr == 1.0
    )
    _verdict(
        "balance/realism formula checks (reported figure values 0.454/0.877 "
        "do not reproduce from the table; formula is authoritative)",
        ok,
        f"BR(CGAN)={br_cgan:.4f} BR(AATM)={br_aatm:.4f} "
        f"BR(uniform)={uniform:.4f} RR(compliant)={compliant_rr:.4f}",
    )


# =====================================================================
# Criterion 4: AATM generation quality at desk scale
# =====================================================================

def test_criterion_generation_quality(vocab, seed_bank):
    config = GenerationConfig(class_plan={label: 100 for label in ALL_LABELS},
                              rng_seed=42)
    start = time.perf_counter()
    corpus = generate_corpus(config, seed_bank, vocab)
    elapsed = time.perf_counter() - start

    br = balance_rate(corpus.class_counts())
    rr = realism_rate_corpus(corpus.windows)
    consistent = sum(1 for w in corpus.windows if classify_window(w) == w.label)

    # multi-mixing on skewed seeds vs the planned generator on the same seeds
    skewed = [
        generate_window(seed_bank.templates[i % 3], ClassLabel.NORMAL, config,
                        vocab, stream_key=10_000 + i, window_id=f"skew-n{i}")
        for i in range(10)
    ]
    skewed += [
        generate_window(seed_bank.templates[0], ClassLabel.DI, config, vocab,
                        stream_key=10_100, window_id="skew-d0").relabeled(ClassLabel.DI),
    ]
    # seed labels: 10 Normal vs 1 DI -- heavily skewed
    mixed = multimix_baseline(skewed, 130, rng_seed=7)
    br_mixed = balance_rate(mixed.class_counts())
    planned = generate_corpus(
        GenerationConfig(class_plan={label: 10 for label in ALL_LABELS}, rng_seed=8),
        SeedBank.from_windows(w for w in skewed if w.label is ClassLabel.NORMAL),
        vocab,
    )
    br_planned = balance_rate(planned.class_counts())

    ok = (
        len(corpus.windows) == 1300
        and elapsed < 60.0
        and br >= 0.95
        and rr >= 0.80
        and consistent == 1300
        and br_mixed < br_planned
    )
    _verdict(
        "generation quality (1300 windows, BR >= 0.95, RR >= 0.80, "
        "100% signature consistency, multimix strictly less balanced)",
        ok,
        f"{elapsed:.1f} s, BR={br:.3f}, RR={rr:.3f}, consistent={consistent}/1300, "
        f"BR(multimix)={br_mixed:.3f} < BR(planned)={br_planned:.3f}",
    )


# =====================================================================
# Criterion 5: rule-based detector accuracy + mock-backend determinism
# =====================================================================

def test_criterion_rule_detector_accuracy(acceptance_corpus):
    result = evaluate_detector(classify_window, acceptance_corpus, name="rules")
    per_class = result.multiclass.per_class_accuracy()
    non_zero_day = {label: acc for label, acc in per_class.items()
                    if label is not ClassLabel.ZERO_DAY}
    binary_accuracy = result.report.accuracy
    ok = all(acc >= 0.95 for acc in non_zero_day.values()) and binary_accuracy >= 0.95
    detail = (f"binary accuracy {binary_accuracy:.3f}, per-class min "
              f"{min(non_zero_day.values()):.3f}")
    _verdict("rule-based detector (per-class >= 95% non-ZeroDay, binary >= 95%)",
             ok, detail)


def test_criterion_mock_backend_determinism():
    transcript = (
        "Dataset #1: ANOMALY (DI Class)\n"
        "Reasoning: state number stepped without a matching data change.\n"
        "Dataset #2: NORMAL\n"
        "Reasoning: clean periodic sequence.\n"
        "Dataset #3: ANOMALY (DOS Class)\n"
        "Reasoning: microsecond-spaced burst of a dozen messages.\n"
    )
    windows = [periodic_window(window_id=f"w{i}", sq0=100 * (i + 1)) for i in range(3)]
    runs = [
        [r.label for r in llm_detect(MockBackend([transcript]), windows)]
        for _ in range(3)
    ]
    expected = [ClassLabel.DI, ClassLabel.NORMAL, ClassLabel.DOS]

    # Table 4's dialogue-detector numbers are comparison fixtures, never
    # live-model reproduction targets
    fixtures = [_fixture_report(name, **vals) for name, vals in TABLE4.items()]
    table = compare_reports(fixtures)
    genai = table.detectors.index("GenAI")
    fixtures_ok = all(table.best[m] == (genai,) for m in ("accuracy", "f1", "mcc"))

    _verdict("mock-backend determinism (box transcript -> DI, Normal, DOS) "
             "+ Table-4 fixture comparison",
             all(run == expected for run in runs) and fixtures_ok,
             f"labels {[l.value for l in runs[0]]}")


# =====================================================================
# Criterion 6: ingestion round-trip for 1,000 randomized valid messages
# =====================================================================

def _random_messages(count: int) -> list[GooseMessage]:
    rng = np.random.default_rng(2024)
    datasets = ("SEL_421_1CFG/LLN0$Goose", "SEL_421_2CFG/LLN0$Goose", "IED_17/LLN0$ds")
    goids = ("SEL_421_1", "SEL_421_2", "IED_17")
    out = []
    for _ in range(count):
        out.append(GooseMessage(
            time_hour=int(rng.integers(0, 24)),
            time_minute=int(rng.integers(0, 60)),
            time_second=int(rng.integers(0, 60)),
            time_micro=int(rng.integers(0, 1_000_000)),
            dm=" ".join(f"{int(b):02x}" for b in rng.integers(0, 256, 3)),
            sm=" ".join(f"{int(b):02x}" for b in rng.integers(0, 256, 3)),
            eth_type="88b8",
            appid=int(rng.integers(0, 0x10000)),
            dataset_name=datasets[int(rng.integers(0, len(datasets)))],
            goid=goids[int(rng.integers(0, len(goids)))],
            st_num=int(rng.integers(0, 2**32)),
            sq_num=int(rng.integers(0, 2**32)),
            data1=int(rng.integers(0, 2)),
            data2=int(rng.integers(0, 2)),
        ))
    return out


def test_criterion_ingestion_round_trip(tmp_path):
    originals = _random_messages(1000)
    frames = [encode_frame(m) for m in originals]
    pcap_path = tmp_path / "round.pcap"
    write_pcap(frames, pcap_path)
    kept = list(filter_goose(read_pcap(pcap_path)))
    decoded = [decode_frame(f) for f in kept]
    windows = [
        MessageWindow(tuple(decoded[i:i + 10]), window_id=f"w{i // 10:04d}")
        for i in range(0, len(decoded), 10)
    ]
    csv_path = tmp_path / "round.csv"
    export_csv(CorpusFile(windows=windows), csv_path)
    reimported = [m for w in import_csv(csv_path).windows for m in w.messages]
    ok = len(reimported) == 1000 and reimported == originals
    _verdict("ingestion round-trip (1000 messages, encode->pcap->filter->"
             "decode->CSV->import, bit-exact)", ok,
             f"{len(reimported)} recovered")
