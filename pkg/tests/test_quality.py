import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from goosekit.core.message import ALL_LABELS, ClassLabel
from goosekit.quality import (
    balance_rate,
    quality_report,
    realism_rate_corpus,
    realism_rate_window,
)

from conftest import message_at, periodic_window, window_of

US = 1_000_000
H10 = 10 * 3600 * US

# Table 3 class-count columns.
CGAN_COUNTS = (961, 712, 789, 403, 111, 277, 311, 233, 424, 193, 219, 206, 161)
AATM_COUNTS = (350, 401, 419, 396, 334, 348, 325, 430, 349, 348, 428, 331, 541)


def _oracle_br(counts):
    """Independent direct evaluation: 1/2 (min/max + normalized entropy)."""
    total = sum(counts)
    entropy = -sum((n / total) * math.log2(n / total) for n in counts if n)
    return 0.5 * (min(counts) / max(counts) + entropy / math.log2(13))


def _counts(values) -> dict:
    return dict(zip(ALL_LABELS, values))


# --- balance rate ---

def test_uniform_13_classes_is_perfectly_balanced():
    assert balance_rate(_counts([100] * 13)) == pytest.approx(1.0)


def test_cgan_table_counts():
    expected = _oracle_br(CGAN_COUNTS)
    got = balance_rate(_counts(CGAN_COUNTS))
    assert got == pytest.approx(expected, abs=1e-12)
    assert got == pytest.approx(0.519, abs=1e-3)


def test_aatm_table_counts():
    expected = _oracle_br(AATM_COUNTS)
    got = balance_rate(_counts(AATM_COUNTS))
    assert got == pytest.approx(expected, abs=1e-12)
    assert got == pytest.approx(0.799, abs=1e-3)


def test_single_class_scores_zero():
    assert balance_rate({ClassLabel.NORMAL: 500}) == 0.0


def test_missing_classes_are_penalized():
    two = balance_rate({ClassLabel.NORMAL: 50, ClassLabel.DI: 50})
    assert 0.0 < two < 0.5


def test_empty_counts_rejected():
    with pytest.raises(ValueError):
        balance_rate({})
    with pytest.raises(ValueError):
        balance_rate({ClassLabel.NORMAL: 0})
    with pytest.raises(ValueError):
        balance_rate({ClassLabel.NORMAL: -1})


@given(st.lists(st.integers(0, 400), min_size=13, max_size=13).filter(sum),
       st.integers(2, 9))
@settings(max_examples=60, deadline=None)
def test_balance_rate_is_scale_invariant(values, k):
    base = _counts(values)
    scaled = _counts([v * k for v in values])
    assert balance_rate(base) == pytest.approx(balance_rate(scaled), abs=1e-12)


@given(st.lists(st.integers(0, 400), min_size=13, max_size=13).filter(sum))
@settings(max_examples=60, deadline=None)
def test_balance_rate_matches_oracle_and_range(values):
    got = balance_rate(_counts(values))
    nonzero_or_all = values if all(values) else values
    assert 0.0 <= got <= 1.0
    assert got == pytest.approx(_oracle_br(nonzero_or_all), abs=1e-12)


def test_balance_rate_is_class_permutation_invariant():
    shuffled = list(CGAN_COUNTS)
    random.Random(7).shuffle(shuffled)
    assert balance_rate(_counts(shuffled)) == pytest.approx(
        balance_rate(_counts(CGAN_COUNTS)), abs=1e-12
    )


# --- realism rate ---

def test_compliant_window_scores_one():
    assert realism_rate_window(periodic_window()) == 1.0


def test_full_burst_window_scores_exp_minus_one():
    # every message sits in one saturated dense run (V6 = 1, lambda6 = 1)
    w = periodic_window(n=25, gap_us=2)
    assert realism_rate_window(w) == pytest.approx(math.exp(-1), abs=1e-12)


def test_half_compliant_half_burst_corpus():
    windows = [periodic_window(window_id="a", n=25),
               periodic_window(window_id="b", n=25, gap_us=2)]
    assert realism_rate_corpus(windows) == pytest.approx(
        (1 + math.exp(-1)) / 2, abs=1e-12
    )


def test_state_drop_plus_replay_window():
    # one st_num drop (rule 3) and one frozen-counter data flip (rule 8,
    # which necessarily also breaks the sq_num increment rule)
    w = window_of(
        message_at(H10, sq_num=150, st_num=9, data1=0),
        message_at(H10 + US, sq_num=151, st_num=3, data1=0),
        message_at(H10 + 2 * US, sq_num=151, st_num=3, data1=1),
    )
    expected = (1 + math.exp(-5) + math.exp(-5) * math.exp(-3)) / 3
    assert realism_rate_window(w) == pytest.approx(expected, abs=1e-12)


def test_single_window_corpus_equals_window_rate():
    w = periodic_window(n=12, gap_us=8)
    assert realism_rate_corpus([w]) == realism_rate_window(w)


def test_higher_severity_never_raises_realism():
    mild = window_of(message_at(H10), message_at(H10 + 15 * US, sq_num=151))
    harsh = window_of(message_at(H10), message_at(H10 + 35 * US, sq_num=151))
    assert realism_rate_window(harsh) < realism_rate_window(mild) < 1.0


def test_corpus_rate_is_bounded_by_window_rates():
    windows = [
        periodic_window(window_id="a"),
        periodic_window(window_id="b", n=25, gap_us=2),
        window_of(message_at(H10, data1=0), message_at(H10 + US, data1=1, sq_num=151)),
    ]
    rates = [realism_rate_window(w) for w in windows]
    corpus = realism_rate_corpus(windows)
    assert min(rates) <= corpus <= max(rates)


def test_corpus_rate_is_permutation_invariant():
    windows = [periodic_window(window_id=f"w{i}", gap_us=g)
               for i, g in enumerate((2, 500_000, 1_000_000))]
    rates = realism_rate_corpus(windows)
    assert realism_rate_corpus(list(reversed(windows))) == pytest.approx(rates)


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        realism_rate_corpus([])


# --- the aggregate report ---

def test_quality_report_shape():
    windows = [
        periodic_window(window_id="a", label=ClassLabel.NORMAL),
        periodic_window(window_id="b", n=12, gap_us=8, label=ClassLabel.DOS),
    ]
    report = quality_report(windows)
    assert report.window_count == 2
    assert report.per_class_counts["Normal"] == 1
    assert report.per_class_counts["DOS"] == 1
    assert len(report.per_rule_mean_scores) == 8
    assert report.per_rule_mean_scores[5] < 1.0  # rule 6 penalized
    assert report.per_rule_mean_scores[0] == 1.0
    payload = report.to_dict()
    assert set(payload) == {
        "balance_rate", "realism_rate", "per_class_counts",
        "per_rule_mean_scores", "window_count",
    }


def test_quality_report_demands_full_labels():
    windows = [periodic_window(window_id="a", label=ClassLabel.NORMAL),
               periodic_window(window_id="b")]
    with pytest.raises(ValueError):
        quality_report(windows)
