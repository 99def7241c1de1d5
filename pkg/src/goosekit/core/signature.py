"""Mapping between rule-violation signatures and traffic classes.

A window's class is determined purely by which rules it violates plus a
little event detail: the sq_num jump size for rule 1 and the changed field
for rule 4. Combinations that match no known class are zero-day patterns.
"""

from __future__ import annotations

from .message import ClassLabel, MessageWindow
from .rules import RuleReport, evaluate_rules

__all__ = ["classify_report", "classify_window", "SPOOF_CLASS_BY_FIELD"]

SPOOF_CLASS_BY_FIELD = {
    "dm": ClassLabel.SP_DM,
    "sm": ClassLabel.SP_SM,
    "eth_type": ClassLabel.SP_TYPE,
    "appid": ClassLabel.SP_APPID,
    "dataset_name": ClassLabel.SP_DATASET,
    "goid": ClassLabel.SP_GOID,
}


def classify_report(report: RuleReport) -> ClassLabel:
    """Assign a class from a rule report.

    Known signatures, checked in order:
      * no violations                         -> Normal
      * replay pattern (rule 8; rule 1 necessarily co-trips
        because the frozen sq_num also breaks the increment) -> RE
      * data change rule alone (rule 2)       -> DI
      * burst frequency alone (rule 6)        -> DOS
      * transmission gap alone (rule 7)       -> SP-time
      * rule 1 alone with sq_num skips >= 2   -> PacketLoss
      * rule 1 alone where every offending transition is a st_num bump
        with no data change (a state change without data correlation,
        surfaced through the sq_num reset)    -> DI
      * one critical field changed (rule 4)   -> SP-<field>
    Everything else with at least one violation is ZeroDay.
    """
    violated = report.violated_rules
    if not violated:
        return ClassLabel.NORMAL
    if 8 in violated and violated <= {1, 8}:
        return ClassLabel.RE
    if violated == {2}:
        return ClassLabel.DI
    if violated == {6}:
        return ClassLabel.DOS
    if violated == {7}:
        return ClassLabel.SP_TIME
    if violated == {1}:
        events = [e for e in report.violations if e.rule_id == 1]
        if all(e.sq_jump is not None and e.sq_jump >= 2 for e in events):
            return ClassLabel.PACKET_LOSS
        if all(e.st_jump == 1 and e.data_changed is False for e in events):
            return ClassLabel.DI
        return ClassLabel.ZERO_DAY
    if violated == {4}:
        changed = {f for e in report.violations if e.rule_id == 4 for f in e.changed_fields}
        if len(changed) == 1:
            return SPOOF_CLASS_BY_FIELD[next(iter(changed))]
        return ClassLabel.ZERO_DAY
    return ClassLabel.ZERO_DAY


def classify_window(window: MessageWindow) -> ClassLabel:
    """Rule-based detector: evaluate the eight rules and map the signature."""
    return classify_report(evaluate_rules(window))
