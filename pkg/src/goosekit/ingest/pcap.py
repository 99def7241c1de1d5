"""Minimal classic-pcap reader/writer (microsecond timestamps, Ethernet)."""

from __future__ import annotations

import struct
from pathlib import Path

from .frames import RawFrame

__all__ = ["write_pcap", "read_pcap"]

PCAP_MAGIC = 0xA1B2C3D4
LINKTYPE_ETHERNET = 1
SNAPLEN = 65_535


def write_pcap(frames, path) -> int:
    """Write frames to a classic pcap file; returns the frame count."""
    count = 0
    with open(path, "wb") as fh:
        fh.write(struct.pack("<IHHiIII", PCAP_MAGIC, 2, 4, 0, 0, SNAPLEN,
                             LINKTYPE_ETHERNET))
        for frame in frames:
            fh.write(struct.pack("<IIII", frame.ts_sec, frame.ts_usec,
                                 len(frame.data), len(frame.data)))
            fh.write(frame.data)
            count += 1
    return count


def read_pcap(path):
    """Yield RawFrames from a classic pcap file (native or swapped byte order)."""
    data = Path(path).read_bytes()
    if len(data) < 24:
        raise ValueError(f"{path}: not a pcap file (too short)")
    magic = struct.unpack_from("<I", data, 0)[0]
    if magic == PCAP_MAGIC:
        endian = "<"
    elif magic == struct.unpack(">I", struct.pack("<I", PCAP_MAGIC))[0]:
        endian = ">"
    else:
        raise ValueError(f"{path}: bad pcap magic 0x{magic:08x}")
    offset = 24
    while offset + 16 <= len(data):
        ts_sec, ts_usec, incl_len, _orig = struct.unpack_from(endian + "IIII",
                                                              data, offset)
        offset += 16
        payload = data[offset:offset + incl_len]
        offset += incl_len
        yield RawFrame(ts_sec=ts_sec, ts_usec=ts_usec, data=payload)
