"""The canonical CSV corpus format and the CorpusFile container.

Header (exact):
    window_id,label,time_hour,time_minute,time_second,time_micro,DM,SM,type,
    appid,dataset,goid,stnum,sqnum,data1,data2

One row per message, UTF-8, LF line endings. Rows of a window are contiguous
and share window_id and label; an empty label field means unlabeled.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from pathlib import Path

from ..core.message import ClassLabel, GooseMessage, MessageWindow, NUMERIC_RANGES
from ..errors import CorpusFormatError

__all__ = ["CSV_HEADER", "CorpusFile", "export_csv", "import_csv", "corpus_hash"]

CSV_HEADER = (
    "window_id", "label", "time_hour", "time_minute", "time_second",
    "time_micro", "DM", "SM", "type", "appid", "dataset", "goid",
    "stnum", "sqnum", "data1", "data2",
)

_INT_BOUNDS = {
    "time_hour": NUMERIC_RANGES["time_hour"],
    "time_minute": NUMERIC_RANGES["time_minute"],
    "time_second": NUMERIC_RANGES["time_second"],
    "time_micro": NUMERIC_RANGES["time_micro"],
    "stnum": NUMERIC_RANGES["st_num"],
    # appid/sqnum: the CSV accepts the full type range (>= 0)
    "appid": (0, None),
    "sqnum": (0, None),
    "data1": (0, 1),
    "data2": (0, 1),
}


@dataclass
class CorpusFile:
    """A sequence of windows plus provenance (source path or config hash)."""

    windows: list[MessageWindow]
    provenance: str = ""

    def __post_init__(self):
        ids = [w.window_id for w in self.windows]
        if len(set(ids)) != len(ids):
            raise ValueError("window ids must be unique within a corpus")

    def __len__(self) -> int:
        return len(self.windows)

    def class_counts(self) -> dict[ClassLabel, int]:
        counts: dict[ClassLabel, int] = {}
        for w in self.windows:
            if w.label is not None:
                counts[w.label] = counts.get(w.label, 0) + 1
        return counts


def _message_row(window_id: str, label: str, msg: GooseMessage) -> list:
    return [
        window_id, label,
        msg.time_hour, msg.time_minute, msg.time_second, msg.time_micro,
        msg.dm, msg.sm, msg.eth_type, msg.appid, msg.dataset_name,
        msg.goid, msg.st_num, msg.sq_num, msg.data1, msg.data2,
    ]


def export_rows(corpus: CorpusFile) -> str:
    """Render the corpus in the canonical CSV format."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for window in corpus.windows:
        label = window.label.value if window.label is not None else ""
        for msg in window.messages:
            writer.writerow(_message_row(window.window_id, label, msg))
    return buf.getvalue()


def export_csv(corpus: CorpusFile, destination) -> None:
    """Write the corpus to a CSV file (UTF-8, LF)."""
    Path(destination).write_text(export_rows(corpus), encoding="utf-8", newline="")


def _parse_int(name: str, raw: str, line_no: int) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise CorpusFormatError(f"{name} is not an integer: {raw!r}", line_no) from None
    lo, hi = _INT_BOUNDS[name]
    if value < lo or (hi is not None and value > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise CorpusFormatError(f"{name}={value} outside {bound}", line_no)
    return value


def import_csv(source) -> CorpusFile:
    """Read a canonical corpus CSV; errors carry the offending line number."""
    text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusFormatError("empty file, expected header row", 1) from None
    if tuple(header) != CSV_HEADER:
        raise CorpusFormatError(
            f"bad header: expected {','.join(CSV_HEADER)}", 1
        )
    windows: list[MessageWindow] = []
    seen_ids: set[str] = set()
    current_id: str | None = None
    current_label: ClassLabel | None = None
    current_msgs: list[GooseMessage] = []

    def close_window():
        if current_id is not None:
            windows.append(MessageWindow(tuple(current_msgs), window_id=current_id,
                                         label=current_label))

    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise CorpusFormatError(
                f"expected {len(CSV_HEADER)} columns, found {len(row)}", line_no
            )
        rec = dict(zip(CSV_HEADER, row))
        label: ClassLabel | None = None
        if rec["label"]:
            try:
                label = ClassLabel.from_name(rec["label"])
            except ValueError as exc:
                raise CorpusFormatError(str(exc), line_no) from None
        msg = GooseMessage(
            time_hour=_parse_int("time_hour", rec["time_hour"], line_no),
            time_minute=_parse_int("time_minute", rec["time_minute"], line_no),
            time_second=_parse_int("time_second", rec["time_second"], line_no),
            time_micro=_parse_int("time_micro", rec["time_micro"], line_no),
            dm=rec["DM"],
            sm=rec["SM"],
            eth_type=rec["type"],
            appid=_parse_int("appid", rec["appid"], line_no),
            dataset_name=rec["dataset"],
            goid=rec["goid"],
            st_num=_parse_int("stnum", rec["stnum"], line_no),
            sq_num=_parse_int("sqnum", rec["sqnum"], line_no),
            data1=_parse_int("data1", rec["data1"], line_no),
            data2=_parse_int("data2", rec["data2"], line_no),
        )
        try:
            msg.validate()
        except ValueError as exc:
            raise CorpusFormatError(str(exc), line_no) from None
        if rec["window_id"] != current_id:
            close_window()
            current_id = rec["window_id"]
            if current_id in seen_ids:
                raise CorpusFormatError(
                    f"window id {current_id!r} appears in two separate blocks", line_no
                )
            seen_ids.add(current_id)
            current_label = label
            current_msgs = []
        elif label != current_label:
            raise CorpusFormatError(
                f"window {current_id!r} mixes labels "
                f"{current_label and current_label.value!r} and {rec['label']!r}",
                line_no,
            )
        current_msgs.append(msg)
    close_window()
    return CorpusFile(windows=windows, provenance=str(source))


def corpus_hash(corpus: CorpusFile) -> str:
    """Content hash over messages only (labels excluded), hex sha256.

    A detector's predicted-label CSV therefore hashes the same as the corpus
    it was run on.
    """
    digest = hashlib.sha256()
    for window in corpus.windows:
        for msg in window.messages:
            row = _message_row(window.window_id, "", msg)
            digest.update("\x1f".join(str(v) for v in row).encode("utf-8"))
            digest.update(b"\x1e")
    return digest.hexdigest()
