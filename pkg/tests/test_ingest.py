import struct

import pytest
from hypothesis import given, settings, strategies as st

from goosekit.core.message import ClassLabel, GooseMessage, MessageWindow
from goosekit.errors import CorpusFormatError, FrameDecodeError
from goosekit.ingest.corpus_csv import (
    CSV_HEADER,
    CorpusFile,
    corpus_hash,
    export_csv,
    export_rows,
    import_csv,
)
from goosekit.ingest.frames import (
    FilterStats,
    RawFrame,
    decode_frame,
    encode_frame,
    filter_goose,
)
from goosekit.ingest.pcap import read_pcap, write_pcap

from conftest import make_message, periodic_window

HEX2 = st.integers(0, 255).map(lambda b: f"{b:02x}")
TRIPLET = st.tuples(HEX2, HEX2, HEX2).map(" ".join)
NAME_TEXT = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), min_codepoint=32),
    min_size=0, max_size=40,
).filter(lambda s: len(s.encode("utf-8")) <= 255)

goose_messages = st.builds(
    GooseMessage,
    time_hour=st.integers(0, 23),
    time_minute=st.integers(0, 59),
    time_second=st.integers(0, 59),
    time_micro=st.integers(0, 999_999),
    dm=TRIPLET,
    sm=TRIPLET,
    eth_type=st.just("88b8"),
    appid=st.integers(0, 0xFFFF),
    dataset_name=NAME_TEXT,
    goid=NAME_TEXT,
    st_num=st.integers(0, 2**32 - 1),
    sq_num=st.integers(0, 2**32 - 1),
    data1=st.integers(0, 1),
    data2=st.integers(0, 1),
)


# --- frame filter ---

def _frame_with_type(eth_type: int, payload=b"") -> RawFrame:
    data = bytes(6) + bytes(6) + struct.pack(">H", eth_type) + payload
    return RawFrame(ts_sec=0, ts_usec=0, data=data)


def test_filter_keeps_goose_frames():
    frame = _frame_with_type(0x88B8)
    assert list(filter_goose([frame])) == [frame]


def test_filter_drops_ipv4():
    assert list(filter_goose([_frame_with_type(0x0800)])) == []


def test_filter_retains_vlan_tagged_goose():
    # hand-built 802.1Q layout: tag type, 2-octet tag, inner EtherType
    data = bytes(12) + struct.pack(">HHH", 0x8100, 0x0001, 0x88B8)
    tagged = RawFrame(ts_sec=0, ts_usec=0, data=data)
    plain = _frame_with_type(0x88B8)
    assert list(filter_goose([tagged, plain])) == [tagged, plain]


def test_filter_drops_vlan_tagged_non_goose():
    data = bytes(12) + struct.pack(">HHH", 0x8100, 0x0001, 0x0800)
    assert list(filter_goose([RawFrame(0, 0, data)])) == []


def test_filter_skips_and_counts_truncated_frames():
    stats = FilterStats()
    out = list(filter_goose([RawFrame(0, 0, b"\x00" * 5), _frame_with_type(0x88B8)],
                            stats))
    assert len(out) == 1
    assert stats.seen == 2 and stats.kept == 1 and stats.truncated == 1


def test_filter_is_idempotent():
    frames = [_frame_with_type(t) for t in (0x88B8, 0x0800, 0x88B8)]
    once = list(filter_goose(frames))
    assert list(filter_goose(once)) == once


# --- encode/decode ---

def test_encode_decode_example_round_trip():
    msg = make_message(dm="01 00 03", sm="27 34 31", appid=3)
    frame = encode_frame(msg)
    assert frame.data[0:3] == bytes([0x01, 0x00, 0x03])
    assert decode_frame(frame) == msg


def test_decode_st_num_boundary():
    msg = make_message(st_num=2**32 - 1)
    assert decode_frame(encode_frame(msg)).st_num == 4294967295


def test_data2_only_difference_is_one_octet():
    a = encode_frame(make_message(data2=0)).data
    b = encode_frame(make_message(data2=1)).data
    assert len(a) == len(b)
    diffs = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    assert len(diffs) == 1
    assert a[diffs[0]] == 0 and b[diffs[0]] == 1


def test_truncated_goid_is_a_decode_error_not_partial():
    frame = encode_frame(make_message(goid="SEL_421_1"))
    clipped = RawFrame(frame.ts_sec, frame.ts_usec, frame.data[:-12])
    with pytest.raises(FrameDecodeError) as err:
        decode_frame(clipped)
    assert err.value.offset > 0


@given(goose_messages)
@settings(max_examples=120, deadline=None)
def test_encode_decode_inverse_property(msg):
    assert decode_frame(encode_frame(msg)) == msg


def test_decode_never_yields_invalid_messages():
    # decode validates; a frame carrying out-of-range data1 must fail
    frame = encode_frame(make_message())
    data = bytearray(frame.data)
    data[-4] = 7  # data1 value octet
    with pytest.raises(FrameDecodeError):
        decode_frame(RawFrame(frame.ts_sec, frame.ts_usec, bytes(data)))


# --- pcap ---

def test_pcap_round_trip(tmp_path):
    frames = [encode_frame(make_message(sq_num=150 + i)) for i in range(5)]
    path = tmp_path / "sample.pcap"
    assert write_pcap(frames, path) == 5
    assert list(read_pcap(path)) == frames


def test_pcap_rejects_garbage(tmp_path):
    path = tmp_path / "bad.pcap"
    path.write_bytes(b"\x00" * 40)
    with pytest.raises(ValueError):
        list(read_pcap(path))


# --- CSV corpus ---

def test_empty_corpus_exports_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    export_csv(CorpusFile(windows=[]), path)
    content = path.read_text(encoding="utf-8")
    assert content == ",".join(CSV_HEADER) + "\n"


def test_csv_round_trip(tmp_path):
    corpus = CorpusFile(
        windows=[
            periodic_window(n=3, window_id="a", label=ClassLabel.NORMAL),
            periodic_window(n=2, window_id="b", label=ClassLabel.DOS, sq0=700),
            periodic_window(n=2, window_id="c"),  # unlabeled
        ]
    )
    path = tmp_path / "corpus.csv"
    export_csv(corpus, path)
    back = import_csv(path)
    assert back.windows == corpus.windows


def test_csv_label_wrong_case_is_rejected(tmp_path):
    corpus = CorpusFile(windows=[periodic_window(n=1, window_id="a",
                                                 label=ClassLabel.DOS)])
    path = tmp_path / "corpus.csv"
    path.write_text(export_rows(corpus).replace("DOS", "dos"), encoding="utf-8")
    with pytest.raises(CorpusFormatError) as err:
        import_csv(path)
    assert err.value.line_no == 2


def test_csv_bad_column_count(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text(",".join(CSV_HEADER) + "\nonly,three,cols\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError) as err:
        import_csv(path)
    assert err.value.line_no == 2


def test_csv_out_of_range_field(tmp_path):
    corpus = CorpusFile(windows=[periodic_window(n=1, window_id="a")])
    rows = export_rows(corpus).splitlines()
    cells = rows[1].split(",")
    cells[2] = "99"  # time_hour
    path = tmp_path / "corpus.csv"
    path.write_text(rows[0] + "\n" + ",".join(cells) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError):
        import_csv(path)


def test_csv_duplicate_window_ids_rejected():
    with pytest.raises(ValueError):
        CorpusFile(windows=[periodic_window(window_id="a"),
                            periodic_window(window_id="a")])


def test_corpus_hash_ignores_labels():
    a = CorpusFile(windows=[periodic_window(window_id="w", label=ClassLabel.NORMAL)])
    b = CorpusFile(windows=[periodic_window(window_id="w", label=ClassLabel.DOS)])
    c = CorpusFile(windows=[periodic_window(window_id="w", label=None, sq0=999)])
    assert corpus_hash(a) == corpus_hash(b)
    assert corpus_hash(a) != corpus_hash(c)


@given(st.lists(goose_messages, min_size=1, max_size=6),
       st.sampled_from([None] + list(ClassLabel)))
@settings(max_examples=60, deadline=None)
def test_csv_round_trip_property(tmp_path_factory, messages, label):
    corpus = CorpusFile(
        windows=[MessageWindow(tuple(messages), window_id="w0", label=label)]
    )
    path = tmp_path_factory.mktemp("csv") / "c.csv"
    export_csv(corpus, path)
    assert import_csv(path).windows == corpus.windows


def test_full_corpus_reimports_with_distinct_window_ids(acceptance_corpus, tmp_path):
    path = tmp_path / "full.csv"
    export_csv(acceptance_corpus, path)
    back = import_csv(path)
    ids = [w.window_id for w in back.windows]
    assert len(ids) == len(set(ids)) == 1300
    assert back.windows == acceptance_corpus.windows
