"""Shared fixtures and window builders."""

from __future__ import annotations

import pytest

from goosekit.core.message import ALL_LABELS, ClassLabel, GooseMessage, MessageWindow
from goosekit.aatm.config import CategoricalVocab, GenerationConfig, SeedBank
from goosekit.aatm.generate import generate_corpus

BASE_FIELDS = dict(
    time_hour=10,
    time_minute=19,
    time_second=23,
    time_micro=680_704,
    dm="01 00 03",
    sm="27 34 31",
    eth_type="88b8",
    appid=3,
    dataset_name="SEL_421_1CFG/LLN0$Goose",
    goid="SEL_421_1",
    st_num=27,
    sq_num=150,
    data1=0,
    data2=0,
)


def make_message(**overrides) -> GooseMessage:
    fields = dict(BASE_FIELDS)
    fields.update(overrides)
    return GooseMessage(**fields)


def message_at(us_of_day: int, **overrides) -> GooseMessage:
    """Message with its time fields derived from microseconds since midnight."""
    return make_message(
        time_hour=(us_of_day // 3_600_000_000) % 24,
        time_minute=(us_of_day // 60_000_000) % 60,
        time_second=(us_of_day // 1_000_000) % 60,
        time_micro=us_of_day % 1_000_000,
        **overrides,
    )


def periodic_window(
    n: int = 10,
    gap_us: int = 1_000_000,
    start_us: int = 10 * 3_600_000_000,
    sq0: int = 150,
    st: int = 27,
    window_id: str = "w0",
    label: ClassLabel | None = None,
    **overrides,
) -> MessageWindow:
    """Fully compliant periodic window: fixed gap, incrementing sq_num."""
    messages = tuple(
        message_at(start_us + i * gap_us, sq_num=sq0 + i, st_num=st, **overrides)
        for i in range(n)
    )
    return MessageWindow(messages, window_id=window_id, label=label)


def window_of(*messages, window_id="w0", label=None) -> MessageWindow:
    return MessageWindow(tuple(messages), window_id=window_id, label=label)


@pytest.fixture(scope="session")
def vocab() -> CategoricalVocab:
    return CategoricalVocab.default()


@pytest.fixture(scope="session")
def seed_bank(vocab) -> SeedBank:
    return SeedBank.default(vocab)


@pytest.fixture(scope="session")
def acceptance_corpus(vocab, seed_bank):
    """The shared 1300-window corpus (100 per class, fixed seed)."""
    config = GenerationConfig(
        class_plan={label: 100 for label in ALL_LABELS}, rng_seed=42
    )
    return generate_corpus(config, seed_bank, vocab)
