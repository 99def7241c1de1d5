"""Ethernet frame encoding/decoding for GOOSE records.

Frame layout (see README): destination MAC (6), source MAC (6), optional
802.1Q tag (4), EtherType (2, 0x88B8 for GOOSE), then the APDU -- appid as a
big-endian 16-bit word followed by fixed-order tag-length-value entries:

    0x01 dataset_name (UTF-8)   0x02 goid (UTF-8)
    0x03 st_num (4 BE)          0x04 sq_num (4 BE)
    0x05 data1 (1)              0x06 data2 (1)

The MAC triplet fields (dm/sm) map to the first three octets of each MAC;
the remaining octets are zero on encode and ignored on decode. The capture
timestamp carries the time-of-day fields (day number is not represented).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..core.message import GooseMessage
from ..errors import FrameDecodeError

__all__ = ["RawFrame", "FilterStats", "GOOSE_ETH_TYPE", "VLAN_TAG_TYPE",
           "encode_frame", "decode_frame", "filter_goose"]

GOOSE_ETH_TYPE = 0x88B8
VLAN_TAG_TYPE = 0x8100
MIN_FRAME_LEN = 14  # Ethernet header

_TLV_ORDER = (
    (0x01, "dataset_name"),
    (0x02, "goid"),
    (0x03, "st_num"),
    (0x04, "sq_num"),
    (0x05, "data1"),
    (0x06, "data2"),
)


@dataclass(frozen=True)
class RawFrame:
    """A captured Ethernet frame with its arrival timestamp."""

    ts_sec: int
    ts_usec: int
    data: bytes


@dataclass
class FilterStats:
    seen: int = 0
    kept: int = 0
    truncated: int = 0


def _eth_type_and_payload(frame: RawFrame) -> tuple[int | None, int]:
    """EtherType after any single 802.1Q tag, plus the payload offset."""
    data = frame.data
    if len(data) < MIN_FRAME_LEN:
        return None, 0
    eth_type = struct.unpack_from(">H", data, 12)[0]
    offset = 14
    if eth_type == VLAN_TAG_TYPE:
        if len(data) < 18:
            return None, 0
        eth_type = struct.unpack_from(">H", data, 16)[0]
        offset = 18
    return eth_type, offset


def filter_goose(frames, stats: FilterStats | None = None):
    """Yield only GOOSE frames (EtherType 0x88B8, tagged or untagged).

    Truncated frames are skipped and counted, never fatal. Order preserved;
    the filter is idempotent.
    """
    for frame in frames:
        if stats is not None:
            stats.seen += 1
        if len(frame.data) < MIN_FRAME_LEN:
            if stats is not None:
                stats.truncated += 1
            continue
        eth_type, _ = _eth_type_and_payload(frame)
        if eth_type == GOOSE_ETH_TYPE:
            if stats is not None:
                stats.kept += 1
            yield frame


def _mac_from_triplet(triplet: str) -> bytes:
    head = bytes(int(part, 16) for part in triplet.split())
    return head + b"\x00\x00\x00"


def _triplet_from_mac(mac: bytes) -> str:
    return " ".join(f"{b:02x}" for b in mac[:3])


def encode_frame(msg: GooseMessage) -> RawFrame:
    """Serialize a valid message into an untagged GOOSE frame.

    Inverse of :func:`decode_frame`. The time-of-day fields become the
    capture timestamp (day 0).
    """
    msg.validate()
    if msg.appid > 0xFFFF:
        raise ValueError(f"appid {msg.appid} does not fit the 2-octet wire field")
    if msg.sq_num > 0xFFFFFFFF:
        raise ValueError(f"sq_num {msg.sq_num} does not fit the 4-octet wire field")
    parts = [
        _mac_from_triplet(msg.dm),
        _mac_from_triplet(msg.sm),
        struct.pack(">H", int(msg.eth_type, 16)),
        struct.pack(">H", msg.appid),
    ]
    for tag, name in _TLV_ORDER:
        if name in ("dataset_name", "goid"):
            value = getattr(msg, name).encode("utf-8")
            if len(value) > 255:
                raise ValueError(f"{name} longer than 255 bytes cannot be encoded")
        elif name in ("st_num", "sq_num"):
            value = struct.pack(">I", getattr(msg, name))
        else:
            value = struct.pack(">B", getattr(msg, name))
        parts.append(struct.pack(">BB", tag, len(value)) + value)
    ts_sec = (msg.time_hour * 60 + msg.time_minute) * 60 + msg.time_second
    return RawFrame(ts_sec=ts_sec, ts_usec=msg.time_micro, data=b"".join(parts))


def decode_frame(frame: RawFrame) -> GooseMessage:
    """Parse a GOOSE frame into a message; raises FrameDecodeError on damage."""
    eth_type, offset = _eth_type_and_payload(frame)
    if eth_type is None:
        raise FrameDecodeError("frame shorter than an Ethernet header", 0)
    data = frame.data
    fields: dict[str, object] = {
        "dm": _triplet_from_mac(data[0:6]),
        "sm": _triplet_from_mac(data[6:12]),
        "eth_type": f"{eth_type:04x}",
    }
    if len(data) < offset + 2:
        raise FrameDecodeError("frame truncated before appid", offset)
    fields["appid"] = struct.unpack_from(">H", data, offset)[0]
    offset += 2
    for tag, name in _TLV_ORDER:
        if len(data) < offset + 2:
            raise FrameDecodeError(f"frame truncated before {name} tag", offset)
        got_tag, length = struct.unpack_from(">BB", data, offset)
        if got_tag != tag:
            raise FrameDecodeError(
                f"expected tag 0x{tag:02x} for {name}, found 0x{got_tag:02x}", offset
            )
        offset += 2
        if len(data) < offset + length:
            raise FrameDecodeError(f"{name} value truncated", offset)
        value = data[offset:offset + length]
        offset += length
        if name in ("dataset_name", "goid"):
            fields[name] = value.decode("utf-8")
        elif name in ("st_num", "sq_num"):
            if length != 4:
                raise FrameDecodeError(f"{name} must be 4 octets, got {length}", offset)
            fields[name] = struct.unpack(">I", value)[0]
        else:
            if length != 1:
                raise FrameDecodeError(f"{name} must be 1 octet, got {length}", offset)
            fields[name] = value[0]
    day_sec = frame.ts_sec % 86_400
    msg = GooseMessage(
        time_hour=day_sec // 3600,
        time_minute=(day_sec // 60) % 60,
        time_second=day_sec % 60,
        time_micro=frame.ts_usec,
        **fields,  # type: ignore[arg-type]
    )
    try:
        msg.validate()
    except ValueError as exc:
        raise FrameDecodeError(f"decoded record is invalid: {exc}", offset) from None
    return msg
