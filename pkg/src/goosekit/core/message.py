"""Domain types for GOOSE records: messages, windows, and class labels.

A message carries the 14 features used throughout the toolkit: 9 numerical
(four time-of-day fields, appid, st_num, sq_num, data1, data2) and 5
categorical (dm, sm, eth_type, dataset_name, goid).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace

__all__ = [
    "ALL_LABELS",
    "ClassLabel",
    "GooseMessage",
    "MessageWindow",
    "NUMERIC_FIELDS",
    "CATEGORICAL_FIELDS",
    "NUMERIC_RANGES",
    "ST_NUM_MAX",
    "time_of_day_us",
]

ST_NUM_MAX = 2**32 - 1
SQ_NUM_MAX = 2**32 - 1
APPID_MAX = 0xFFFF

MAC_TRIPLET_RE = re.compile(r"^[0-9a-f]{2} [0-9a-f]{2} [0-9a-f]{2}$", re.IGNORECASE)
ETH_TYPE_RE = re.compile(r"^[0-9a-f]{4}$", re.IGNORECASE)

# Order matters: this is the canonical numerical feature vector layout.
NUMERIC_FIELDS = (
    "time_hour",
    "time_minute",
    "time_second",
    "time_micro",
    "appid",
    "st_num",
    "sq_num",
    "data1",
    "data2",
)

CATEGORICAL_FIELDS = ("dm", "sm", "eth_type", "dataset_name", "goid")

# Inclusive bounds for each numerical field. appid/sq_num are capped at their
# wire-format widths (2 and 4 octets); the CSV layer accepts anything >= 0 but
# projection and encoding stay within these.
NUMERIC_RANGES = {
    "time_hour": (0, 23),
    "time_minute": (0, 59),
    "time_second": (0, 59),
    "time_micro": (0, 999_999),
    "appid": (0, APPID_MAX),
    "st_num": (0, ST_NUM_MAX),
    "sq_num": (0, SQ_NUM_MAX),
    "data1": (0, 1),
    "data2": (0, 1),
}


class ClassLabel(enum.Enum):
    """Closed set of 13 traffic classes. Values are the serialized names."""

    NORMAL = "Normal"
    DI = "DI"
    DOS = "DOS"
    RE = "RE"
    SP_TIME = "SP-time"
    SP_DM = "SP-DM"
    SP_SM = "SP-SM"
    SP_TYPE = "SP-type"
    SP_APPID = "SP-appid"
    SP_DATASET = "SP-dataset"
    SP_GOID = "SP-goid"
    PACKET_LOSS = "PacketLoss"
    ZERO_DAY = "ZeroDay"

    @classmethod
    def from_name(cls, name: str) -> "ClassLabel":
        """Parse a serialized label, rejecting anything outside the closed set."""
        for label in cls:
            if label.value == name:
                return label
        raise ValueError(f"unknown class label {name!r}")

    def __str__(self) -> str:
        return self.value


ALL_LABELS = tuple(ClassLabel)


@dataclass(frozen=True)
class GooseMessage:
    """One GOOSE record with all 14 features.

    Instances are plain data; nothing is validated at construction so that
    deliberately malformed records (e.g. bad timestamps for rule fixtures)
    can be represented. Call :meth:`validate` where well-formedness is a
    precondition (decoding, CSV import, encoding).
    """

    time_hour: int
    time_minute: int
    time_second: int
    time_micro: int
    dm: str
    sm: str
    eth_type: str
    appid: int
    dataset_name: str
    goid: str
    st_num: int
    sq_num: int
    data1: int
    data2: int

    def validate(self) -> None:
        """Raise ValueError if any field violates the type invariants."""
        for name in ("time_hour", "time_minute", "time_second", "time_micro"):
            lo, hi = NUMERIC_RANGES[name]
            value = getattr(self, name)
            if not (isinstance(value, int) and lo <= value <= hi):
                raise ValueError(f"{name}={value!r} outside [{lo}, {hi}]")
        if not (isinstance(self.st_num, int) and 0 <= self.st_num <= ST_NUM_MAX):
            raise ValueError(f"st_num={self.st_num!r} outside [0, {ST_NUM_MAX}]")
        if not (isinstance(self.sq_num, int) and self.sq_num >= 0):
            raise ValueError(f"sq_num={self.sq_num!r} must be >= 0")
        if not (isinstance(self.appid, int) and self.appid >= 0):
            raise ValueError(f"appid={self.appid!r} must be >= 0")
        if self.data1 not in (0, 1) or self.data2 not in (0, 1):
            raise ValueError(f"data1/data2 must be 0 or 1, got {self.data1}/{self.data2}")
        for name in ("dm", "sm"):
            if not MAC_TRIPLET_RE.match(getattr(self, name)):
                raise ValueError(f"{name}={getattr(self, name)!r} is not a MAC triplet")
        if not ETH_TYPE_RE.match(self.eth_type):
            raise ValueError(f"eth_type={self.eth_type!r} is not 4 hex digits")

    def time_valid(self) -> bool:
        """True when all four time-of-day fields are within range."""
        for name in ("time_hour", "time_minute", "time_second", "time_micro"):
            lo, hi = NUMERIC_RANGES[name]
            value = getattr(self, name)
            if not (isinstance(value, int) and lo <= value <= hi):
                return False
        return True

    def numeric_vector(self) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in NUMERIC_FIELDS)

    def categorical_vector(self) -> tuple[str, ...]:
        return tuple(getattr(self, name) for name in CATEGORICAL_FIELDS)

    def with_fields(self, **changes) -> "GooseMessage":
        return replace(self, **changes)


def time_of_day_us(msg: GooseMessage) -> int:
    """Microseconds since midnight. Windows are assumed not to span midnight."""
    return (
        ((msg.time_hour * 60 + msg.time_minute) * 60 + msg.time_second) * 1_000_000
        + msg.time_micro
    )


@dataclass(frozen=True)
class MessageWindow:
    """An ordered run of messages; the unit of rule evaluation and labeling.

    Ordering is positional. Timestamps are data: deliberately anomalous
    windows may carry non-monotone or out-of-range time fields.
    """

    messages: tuple[GooseMessage, ...]
    window_id: str = ""
    label: ClassLabel | None = None

    def __post_init__(self):
        if not isinstance(self.messages, tuple):
            object.__setattr__(self, "messages", tuple(self.messages))
        if len(self.messages) < 1:
            raise ValueError("a window needs at least one message")

    def __len__(self) -> int:
        return len(self.messages)

    def relabeled(self, label: ClassLabel | None) -> "MessageWindow":
        return replace(self, label=label)

    def with_id(self, window_id: str) -> "MessageWindow":
        return replace(self, window_id=window_id)
