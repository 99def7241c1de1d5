"""Prompt construction for the dialogue-style detector.

The system preamble states all eight compliance rules exactly once; each
window is rendered as a small CSV table in the canonical column order, and
the expected output grammar pins one verdict block per dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.message import MessageWindow

__all__ = ["RULE_STATEMENTS", "PromptBundle", "render_window", "build_prompt"]

RULE_STATEMENTS = {
    1: "For consecutive messages sharing the same DM and SM, sqnum must "
       "increase by exactly 1; any other step is an anomaly.",
    2: "A data1 or data2 value flipping while stnum stays unchanged and "
       "sqnum keeps incrementing points to data injection (DI).",
    3: "For the same DM/SM pair, stnum may stay equal or increase by 1; a "
       "decrease is anomalous unless it wraps from 4294967295 back to 0.",
    4: "DM, SM, type, appid, dataset and goid must stay constant from one "
       "message to the next; any change to these fields is anomalous.",
    5: "Every timestamp must decode to in-range hours (0-23), minutes (0-59), "
       "seconds (0-59) and microseconds (0-999999).",
    6: "Ten or more consecutive messages whose inter-arrival gaps are each "
       "at most 10 microseconds form a flooding burst (DOS).",
    7: "A transmission gap longer than 10 seconds between consecutive "
       "messages signals an interruption (SP-time).",
    8: "A data1 or data2 flip while stnum and sqnum are both frozen points "
       "to a replay (RE).",
}

_RENDER_COLUMNS = (
    "time_hour", "time_minute", "time_second", "time_micro",
    "dm", "sm", "eth_type", "appid", "dataset_name", "goid",
    "st_num", "sq_num", "data1", "data2",
)
_RENDER_HEADER = (
    "time_hour,time_minute,time_second,time_micro,DM,SM,type,appid,"
    "dataset,goid,stnum,sqnum,data1,data2"
)

_GRAMMAR_TEMPLATE = (
    "Answer with exactly {count} verdict block(s), one per dataset, in order:\n"
    "  Dataset #<n>: NORMAL\n"
    "or\n"
    "  Dataset #<n>: ANOMALY (<Class> Class)\n"
    "where <Class> is one of DI, DOS, RE, SP-time, SP-DM, SP-SM, SP-type, "
    "SP-appid, SP-dataset, SP-goid, PacketLoss, ZeroDay.\n"
    "After each verdict add one line starting with `Reasoning:` explaining "
    "which rule drove the call."
)


@dataclass(frozen=True)
class PromptBundle:
    system_preamble: str
    window_renderings: tuple[str, ...]
    expected_output_grammar: str

    def user_message(self) -> str:
        parts = []
        for i, rendering in enumerate(self.window_renderings, start=1):
            parts.append(f"Dataset #{i}:\n{rendering}")
        parts.append(self.expected_output_grammar)
        return "\n\n".join(parts)


def render_window(window: MessageWindow) -> str:
    """Tabular text for one window, canonical CSV column order, no label."""
    lines = [_RENDER_HEADER]
    for msg in window.messages:
        lines.append(",".join(str(getattr(msg, c)) for c in _RENDER_COLUMNS))
    return "\n".join(lines)


def build_prompt(windows, batch_limit: int = 5, feedback=()) -> PromptBundle:
    """Deterministic prompt for 1..batch_limit windows.

    Optional feedback entries (previously misclassified windows) are embedded
    after the rules so the backend can learn from past mistakes.
    """
    windows = list(windows)
    if not windows:
        raise ValueError("prompt needs at least one window")
    if len(windows) > batch_limit:
        raise ValueError(f"batch of {len(windows)} exceeds the limit of {batch_limit}")
    rule_lines = [f"Rule {rid}: {RULE_STATEMENTS[rid]}" for rid in sorted(RULE_STATEMENTS)]
    preamble = (
        "You review GOOSE substation message datasets for protocol anomalies. "
        "Apply the eight rules below to every dataset, track DM/SM context, "
        "and classify each dataset.\n" + "\n".join(rule_lines)
    )
    if feedback:
        examples = "\n\n".join(
            f"Previously misclassified (truth {fb['truth']}, was called "
            f"{fb['predicted']}):\n{fb['rendering']}"
            for fb in feedback
        )
        preamble += "\n\nStudy these corrected examples:\n" + examples
    return PromptBundle(
        system_preamble=preamble,
        window_renderings=tuple(render_window(w) for w in windows),
        expected_output_grammar=_GRAMMAR_TEMPLATE.format(count=len(windows)),
    )
