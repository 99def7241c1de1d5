"""Verdict parsing and the batched detection loop."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from ..core.message import ClassLabel, MessageWindow
from ..errors import BackendError
from .prompt import build_prompt, render_window

__all__ = ["DetectionResponse", "parse_response", "detect",
           "append_feedback", "load_feedback"]

_VERDICT_RE = re.compile(
    r"dataset\s*#?\s*(\d+)\s*:\s*(normal\b|anomaly\s*\(\s*([A-Za-z][A-Za-z -]*?)\s*class\s*\))",
    re.IGNORECASE,
)
_REASON_RE = re.compile(r"reasoning\s*:\s*(.+)", re.IGNORECASE)


def _normalize(token: str) -> str:
    return re.sub(r"[^a-z0-9]", "", token.lower())


_LABEL_BY_TOKEN = {_normalize(label.value): label for label in ClassLabel}
_LABEL_BY_TOKEN["packet loss".replace(" ", "")] = ClassLabel.PACKET_LOSS
_LABEL_BY_TOKEN[_normalize("Zero-day")] = ClassLabel.ZERO_DAY


@dataclass(frozen=True)
class DetectionResponse:
    """One per-window verdict. Unparseable output is flagged, never guessed."""

    window_id: str
    label: ClassLabel | None
    reasoning: str
    parse_ok: bool


def parse_response(text: str) -> dict[int, tuple[ClassLabel | None, str, bool]]:
    """Extract `Dataset #n` verdicts from backend output.

    Returns {dataset_number: (label, reasoning, parse_ok)}. Conflicting
    duplicate verdicts for the same dataset mark it unparsed.
    """
    verdicts: dict[int, tuple[ClassLabel | None, str, bool]] = {}
    matches = list(_VERDICT_RE.finditer(text))
    for pos, match in enumerate(matches):
        number = int(match.group(1))
        if match.group(2).lower().startswith("normal"):
            label: ClassLabel | None = ClassLabel.NORMAL
            ok = True
        else:
            token = _normalize(match.group(3))
            label = _LABEL_BY_TOKEN.get(token)
            ok = label is not None
        # reasoning: first Reasoning: line between this verdict and the next
        tail_end = matches[pos + 1].start() if pos + 1 < len(matches) else len(text)
        reason_match = _REASON_RE.search(text, match.end(), tail_end)
        reasoning = reason_match.group(1).strip() if reason_match else ""
        if number in verdicts and verdicts[number][0] != label:
            verdicts[number] = (None, "conflicting duplicate verdicts", False)
        else:
            verdicts[number] = (label, reasoning, ok)
    return verdicts


def _transcript_entry(path, windows, bundle, response_text) -> None:
    if path is None:
        return
    entry = {
        "window_ids": [w.window_id for w in windows],
        "system": bundle.system_preamble,
        "user": bundle.user_message(),
        "response": response_text,
    }
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry) + "\n")


def detect(backend, windows, batch_limit: int = 5,
           transcript_path=None, feedback=()) -> list[DetectionResponse]:
    """Run the dialogue detector over windows in prompt batches.

    One response per window, re-associated by dataset number. Backend
    failures produce flagged entries for the affected batch; later batches
    still run.
    """
    windows = list(windows)
    out: list[DetectionResponse] = []
    for start in range(0, len(windows), batch_limit):
        batch = windows[start:start + batch_limit]
        bundle = build_prompt(batch, batch_limit=batch_limit, feedback=feedback)
        try:
            text = backend.complete(bundle.system_preamble, bundle.user_message())
        except BackendError as exc:
            for window in batch:
                out.append(DetectionResponse(window.window_id, None,
                                             f"backend error: {exc}", False))
            continue
        _transcript_entry(transcript_path, batch, bundle, text)
        verdicts = parse_response(text)
        for i, window in enumerate(batch, start=1):
            if i in verdicts:
                label, reasoning, ok = verdicts[i]
                out.append(DetectionResponse(window.window_id, label if ok else None,
                                             reasoning, ok))
            else:
                out.append(DetectionResponse(window.window_id, None,
                                             "no verdict found in response", False))
    return out


def append_feedback(path, window: MessageWindow, truth: ClassLabel,
                    predicted: ClassLabel | None) -> None:
    """Append a misclassified window to the feedback corpus (JSONL)."""
    entry = {
        "window_id": window.window_id,
        "truth": truth.value,
        "predicted": predicted.value if predicted else "unparsed",
        "rendering": render_window(window),
    }
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry) + "\n")


def load_feedback(path) -> list[dict]:
    """Load feedback entries for embedding into future prompts."""
    p = Path(path)
    if not p.exists():
        return []
    return [json.loads(line) for line in p.read_text(encoding="utf-8").splitlines()
            if line.strip()]
