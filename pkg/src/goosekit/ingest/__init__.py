from .corpus_csv import CSV_HEADER, CorpusFile, corpus_hash, export_csv, export_rows, import_csv
from .frames import (
    FilterStats,
    GOOSE_ETH_TYPE,
    RawFrame,
    decode_frame,
    encode_frame,
    filter_goose,
)
from .pcap import read_pcap, write_pcap

__all__ = [
    "CSV_HEADER",
    "CorpusFile",
    "FilterStats",
    "GOOSE_ETH_TYPE",
    "RawFrame",
    "corpus_hash",
    "decode_frame",
    "encode_frame",
    "export_csv",
    "export_rows",
    "filter_goose",
    "import_csv",
    "read_pcap",
    "write_pcap",
]
