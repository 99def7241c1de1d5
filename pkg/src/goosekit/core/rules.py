"""The eight-rule GOOSE compliance engine.

All rules report under normalized polarity: compliant=True means no anomaly.
For rules whose raw pattern matches the anomaly (data-injection, burst
frequency, replay) compliance means the pattern did NOT match.

Pairing semantics:
  * rules 1, 2, 3 and 8 compare each message against its most recent
    predecessor with the same (dm, sm); a never-before-seen pair starts a
    fresh comparison chain,
  * rule 4 compares each message against its immediate positional
    predecessor over the six critical fields,
  * rule 5 is per message, rules 6 and 7 work on positional timestamp gaps.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidRuleId
from .message import GooseMessage, MessageWindow, ST_NUM_MAX, time_of_day_us

__all__ = [
    "RULE_IDS",
    "CRITICAL_FIELDS",
    "BURST_RUN_LENGTH",
    "BURST_GAP_US",
    "MAX_SILENCE_US",
    "RuleViolation",
    "RuleOutcome",
    "RuleReport",
    "collect_violations",
    "check_rule",
    "evaluate_rules",
    "violation_severity",
]

RULE_IDS = (1, 2, 3, 4, 5, 6, 7, 8)

# Rule 4 critical feature set (6 fields; V4 denominator).
CRITICAL_FIELDS = ("dm", "sm", "eth_type", "appid", "dataset_name", "goid")

BURST_RUN_LENGTH = 10          # messages
BURST_GAP_US = 10              # max inter-arrival gap inside a burst
MAX_SILENCE_US = 10_000_000    # rule 7: gaps beyond 10 s are anomalous
SILENCE_SCALE_US = 30_000_000  # severity ramp: (gap - 10s) / 30s


@dataclass(frozen=True)
class RuleViolation:
    """One violation event, attributed to the offending message position."""

    rule_id: int
    index: int
    severity: float
    detail: str
    # rule 4: which critical fields changed on this transition
    changed_fields: tuple[str, ...] = ()
    # rule 1: sq_num jump (sq_cur - sq_prev; 1 would be compliant) plus the
    # st_num/data context of the same transition, for signature mapping
    sq_jump: int | None = None
    st_jump: int | None = None
    data_changed: bool | None = None
    # rule 6: [start, end] message positions of the dense run
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class RuleOutcome:
    compliant: bool
    severity: float
    first_violation_index: int | None


@dataclass(frozen=True)
class RuleReport:
    """Per-rule compliance bits and max per-event severities for a window."""

    outcomes: dict[int, RuleOutcome]
    violations: tuple[RuleViolation, ...]

    def compliant(self, rule_id: int) -> bool:
        return self.outcomes[rule_id].compliant

    def severity(self, rule_id: int) -> float:
        return self.outcomes[rule_id].severity

    @property
    def violated_rules(self) -> frozenset[int]:
        return frozenset(r for r, o in self.outcomes.items() if not o.compliant)

    @property
    def all_compliant(self) -> bool:
        return not self.violated_rules


def _chain_pairs(window: MessageWindow) -> list[tuple[int, int]]:
    last_seen: dict[tuple[str, str], int] = {}
    pairs = []
    for i, msg in enumerate(window.messages):
        key = (msg.dm, msg.sm)
        if key in last_seen:
            pairs.append((last_seen[key], i))
        last_seen[key] = i
    return pairs


def _data_changed(prev: GooseMessage, cur: GooseMessage) -> bool:
    return cur.data1 != prev.data1 or cur.data2 != prev.data2


def _gaps_us(window: MessageWindow) -> list[int]:
    times = [time_of_day_us(m) for m in window.messages]
    return [times[i + 1] - times[i] for i in range(len(times) - 1)]


def _rule1(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for p, c in _chain_pairs(window):
        prev, cur = window.messages[p], window.messages[c]
        jump = cur.sq_num - prev.sq_num
        if jump != 1:
            out.append(
                RuleViolation(
                    1, c, 1.0,
                    f"sq_num {prev.sq_num} -> {cur.sq_num} (expected +1)",
                    sq_jump=jump,
                    st_jump=cur.st_num - prev.st_num,
                    data_changed=_data_changed(prev, cur),
                )
            )
    return out


def _rule2(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for p, c in _chain_pairs(window):
        prev, cur = window.messages[p], window.messages[c]
        if (
            _data_changed(prev, cur)
            and cur.st_num == prev.st_num
            and cur.sq_num == prev.sq_num + 1
        ):
            out.append(
                RuleViolation(
                    2, c, 1.0,
                    f"data changed ({prev.data1}{prev.data2} -> {cur.data1}{cur.data2}) "
                    f"with st_num fixed at {cur.st_num} and sq_num incrementing",
                )
            )
    return out


def _rule3(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for p, c in _chain_pairs(window):
        prev, cur = window.messages[p], window.messages[c]
        rollover = prev.st_num == ST_NUM_MAX and cur.st_num == 0
        if not (cur.st_num == prev.st_num or cur.st_num == prev.st_num + 1 or rollover):
            out.append(
                RuleViolation(3, c, 1.0, f"st_num {prev.st_num} -> {cur.st_num}")
            )
    return out


def _rule4(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for i in range(1, len(window.messages)):
        prev, cur = window.messages[i - 1], window.messages[i]
        changed = tuple(
            name for name in CRITICAL_FIELDS
            if getattr(cur, name) != getattr(prev, name)
        )
        if changed:
            out.append(
                RuleViolation(
                    4, i, len(changed) / len(CRITICAL_FIELDS),
                    "critical field change: " + ", ".join(changed),
                    changed_fields=changed,
                )
            )
    return out


def _rule5(window: MessageWindow) -> list[RuleViolation]:
    return [
        RuleViolation(
            5, i, 1.0,
            f"timestamp {m.time_hour:02d}:{m.time_minute:02d}:"
            f"{m.time_second:02d}.{m.time_micro:06d} out of format",
        )
        for i, m in enumerate(window.messages)
        if not m.time_valid()
    ]


def _dense_runs(window: MessageWindow) -> list[tuple[int, int]]:
    """Maximal runs [start, end] whose internal gaps are all <= 10 us."""
    gaps = _gaps_us(window)
    runs = []
    start = 0
    for i, gap in enumerate(gaps):
        if gap > BURST_GAP_US:
            if i > start:
                runs.append((start, i))
            start = i + 1
    if len(window.messages) - 1 > start:
        runs.append((start, len(window.messages) - 1))
    return runs


def _rule6(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for start, end in _dense_runs(window):
        count = end - start + 1
        if count >= BURST_RUN_LENGTH:
            # Observed frequency = consecutive dense-message count; threshold 10.
            severity = min(1.0, count / BURST_RUN_LENGTH - 1.0)
            out.append(
                RuleViolation(
                    6, start, severity,
                    f"{count} consecutive messages with gaps <= {BURST_GAP_US} us",
                    span=(start, end),
                )
            )
    return out


def _rule7(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for i, gap in enumerate(_gaps_us(window)):
        if gap > MAX_SILENCE_US:
            severity = min(1.0, (gap - MAX_SILENCE_US) / SILENCE_SCALE_US)
            out.append(
                RuleViolation(7, i + 1, severity, f"{gap / 1e6:.3f} s transmission gap")
            )
    return out


def _rule8(window: MessageWindow) -> list[RuleViolation]:
    out = []
    for p, c in _chain_pairs(window):
        prev, cur = window.messages[p], window.messages[c]
        if (
            _data_changed(prev, cur)
            and cur.st_num == prev.st_num
            and cur.sq_num == prev.sq_num
        ):
            out.append(
                RuleViolation(
                    8, c, 1.0,
                    f"data changed with st_num and sq_num both frozen "
                    f"(st={cur.st_num}, sq={cur.sq_num})",
                )
            )
    return out


_RULE_FUNCS = {
    1: _rule1,
    2: _rule2,
    3: _rule3,
    4: _rule4,
    5: _rule5,
    6: _rule6,
    7: _rule7,
    8: _rule8,
}


def collect_violations(window: MessageWindow, rule_ids=RULE_IDS) -> list[RuleViolation]:
    """All violation events for the given rules, in rule-then-position order."""
    events: list[RuleViolation] = []
    for rule_id in rule_ids:
        if rule_id not in _RULE_FUNCS:
            raise InvalidRuleId(f"rule id must be in 1..8, got {rule_id!r}")
        events.extend(_RULE_FUNCS[rule_id](window))
    return events


def check_rule(rule_id: int, window: MessageWindow) -> tuple[bool, float, int | None]:
    """Evaluate one rule; returns (compliant, severity, first_violation_index).

    Severity is the worst per-event severity in the window (0.0 when
    compliant). Pairwise rules are vacuously compliant on single-message
    windows; rule 6 is vacuously compliant below 10 messages.
    """
    events = collect_violations(window, (rule_id,))
    if not events:
        return True, 0.0, None
    return False, max(e.severity for e in events), min(e.index for e in events)


def evaluate_rules(window: MessageWindow) -> RuleReport:
    """Full eight-rule report for a window. Deterministic for identical input."""
    events = collect_violations(window)
    outcomes = {}
    for rule_id in RULE_IDS:
        mine = [e for e in events if e.rule_id == rule_id]
        if mine:
            outcomes[rule_id] = RuleOutcome(
                False, max(e.severity for e in mine), min(e.index for e in mine)
            )
        else:
            outcomes[rule_id] = RuleOutcome(True, 0.0, None)
    return RuleReport(outcomes=outcomes, violations=tuple(events))


def violation_severity(rule_id: int, window: MessageWindow) -> float:
    """Normalized severity in [0, 1] for one rule over a window."""
    _, severity, _ = check_rule(rule_id, window)
    return severity
