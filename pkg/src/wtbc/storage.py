"""Index file serialization.

Layout (little-endian throughout, 32-bit counts, 64-bit positions):

    magic "WTBC1" | version u32 | flags u32 | s u32 | c u32 | N u32 | n u64
    | V u32 | block_size u32 | epsilon f64 | source_bytes u64
    | section sizes: vocab u64, tree u64, bounds u64, bitmaps u64
    | vocab section   : per rank: word_len u32, utf-8 word, freq u32, df u32
    | tree section    : node_count u32; per node (breadth-first, children in
                        byte order): path_len u8, path, data_len u64, data
    | bounds section  : N document-end positions, u64 each
    | bitmaps section : entry_count u32, then packed bits (LSB-first,
                        byte-aligned per word) in ascending rank order

Which words carry a bitmap, and each bitmap's bit length, are fully
determined by the vocabulary section plus the header epsilon (word entries
with idf above epsilon; freq bits each), so the bitmap section stores no
per-entry ids or lengths.  Rank/select counters are rebuilt on load, so
saving after loading with the same configuration reproduces the file byte
for byte.
"""

from __future__ import annotations

import io
import struct

from .corpus import CollectionStats, VocabEntry, Vocabulary
from .errors import IndexFormatError
from .rankselect import BitVectorRS, ByteSequenceRS, DocBoundaries
from .retrieval import WordBitmap, _idf_value
from .scdc import SCDCParams
from .tree import WTBCIndex, WTBCNode

MAGIC = b"WTBC1"
VERSION = 1

_FLAG_BITMAPS = 1

_HEADER = struct.Struct("<5sIIIIIQIIdQ")
_TOC = struct.Struct("<QQQQ")


def _vocab_blob(vocab: Vocabulary) -> bytes:
    out = io.BytesIO()
    for e in vocab.entries:
        raw = e.word.encode("utf-8")
        out.write(struct.pack("<I", len(raw)))
        out.write(raw)
        out.write(struct.pack("<II", e.freq, e.df))
    return out.getvalue()


def _tree_blob(index: WTBCIndex) -> bytes:
    out = io.BytesIO()
    nodes = list(index.nodes())
    out.write(struct.pack("<I", len(nodes)))
    for path, node in nodes:
        out.write(struct.pack("<B", len(path)))
        out.write(path)
        out.write(struct.pack("<Q", len(node.seq)))
        out.write(node.seq.data)
    return out.getvalue()


def _bounds_blob(bounds: DocBoundaries) -> bytes:
    return struct.pack(f"<{len(bounds)}Q", *bounds.ends)


def _bitmap_ranks(vocab: Vocabulary, n_docs: int, epsilon: float) -> list[int]:
    """Ranks that carry a bitmap: word entries whose idf exceeds epsilon."""
    return [
        e.rank
        for e in vocab.entries
        if vocab.is_word_rank(e.rank) and _idf_value(n_docs, e.df) > epsilon
    ]


def _bitmaps_blob(index: WTBCIndex, epsilon: float) -> bytes:
    bitmaps = index.bitmaps
    expected = _bitmap_ranks(index.vocab, index.n_docs, epsilon)
    if sorted(bitmaps) != expected:
        raise ValueError("bitmap set does not match the vocabulary and epsilon")
    out = io.BytesIO()
    out.write(struct.pack("<I", len(expected)))
    for rank in expected:
        bits = bitmaps[rank].bits
        if bits.nbits != index.vocab.entries[rank].freq:
            raise ValueError(f"bitmap for rank {rank} has wrong length")
        out.write(bits.buf)
    return out.getvalue()


def save_index(index: WTBCIndex, path: str) -> None:
    flags = _FLAG_BITMAPS if index.bitmaps is not None else 0
    epsilon = index.bitmap_epsilon if index.bitmap_epsilon is not None else 0.0
    vocab_blob = _vocab_blob(index.vocab)
    tree_blob = _tree_blob(index)
    bounds_blob = _bounds_blob(index.bounds)
    bitmaps_blob = _bitmaps_blob(index, epsilon) if index.bitmaps is not None else b""
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        flags,
        index.params.s,
        index.params.c,
        index.n_docs,
        index.n_tokens,
        len(index.vocab),
        index.block_size,
        epsilon,
        index.source_bytes,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(_TOC.pack(len(vocab_blob), len(tree_blob), len(bounds_blob), len(bitmaps_blob)))
        fh.write(vocab_blob)
        fh.write(tree_blob)
        fh.write(bounds_blob)
        fh.write(bitmaps_blob)


class _Reader:
    def __init__(self, blob: bytes, label: str):
        self.blob = blob
        self.pos = 0
        self.label = label

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.blob):
            raise IndexFormatError(f"truncated {self.label} section")
        out = self.blob[self.pos : self.pos + size]
        self.pos += size
        return out

    def unpack(self, fmt: struct.Struct) -> tuple:
        return fmt.unpack(self.take(fmt.size))

    def done(self) -> None:
        if self.pos != len(self.blob):
            raise IndexFormatError(f"{self.label} section has trailing bytes")


_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_NODE_HEAD = struct.Struct("<B")
_VOCAB_TAIL = struct.Struct("<II")


def read_header(path: str) -> dict:
    """Header fields plus section sizes, without loading the sections."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size + _TOC.size)
    if len(head) < _HEADER.size + _TOC.size:
        raise IndexFormatError(f"{path}: too short for an index header")
    (magic, version, flags, s, c, n_docs, n_tokens, vsize, block_size,
     epsilon, source_bytes) = _HEADER.unpack(head[: _HEADER.size])
    if magic != MAGIC:
        raise IndexFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise IndexFormatError(f"{path}: unsupported format version {version}")
    if flags & ~_FLAG_BITMAPS:
        raise IndexFormatError(f"{path}: unknown flag bits 0x{flags:x}")
    vocab_len, tree_len, bounds_len, bitmaps_len = _TOC.unpack(head[_HEADER.size :])
    return {
        "flags": flags,
        "has_bitmaps": bool(flags & _FLAG_BITMAPS),
        "s": s,
        "c": c,
        "n_docs": n_docs,
        "n_tokens": n_tokens,
        "vocab_size": vsize,
        "block_size": block_size,
        "epsilon": epsilon,
        "source_bytes": source_bytes,
        "header_bytes": _HEADER.size + _TOC.size,
        "section_bytes": {
            "vocabulary": vocab_len,
            "tree": tree_len,
            "bounds": bounds_len,
            "bitmaps": bitmaps_len,
        },
    }


def load_index(path: str) -> WTBCIndex:
    meta = read_header(path)
    sizes = meta["section_bytes"]
    with open(path, "rb") as fh:
        fh.seek(meta["header_bytes"])
        vocab_blob = fh.read(sizes["vocabulary"])
        tree_blob = fh.read(sizes["tree"])
        bounds_blob = fh.read(sizes["bounds"])
        bitmaps_blob = fh.read(sizes["bitmaps"])
        if fh.read(1):
            raise IndexFormatError(f"{path}: trailing bytes after last section")
    if any(len(blob) != sizes[name] for name, blob in (
        ("vocabulary", vocab_blob), ("tree", tree_blob),
        ("bounds", bounds_blob), ("bitmaps", bitmaps_blob),
    )):
        raise IndexFormatError(f"{path}: file shorter than its section table")

    rd = _Reader(vocab_blob, "vocabulary")
    entries = []
    for rank in range(meta["vocab_size"]):
        (wlen,) = rd.unpack(_U32)
        word = rd.take(wlen).decode("utf-8")
        freq, df = rd.unpack(_VOCAB_TAIL)
        entries.append(VocabEntry(word, freq, df, rank))
    rd.done()
    vocab = Vocabulary(entries)

    rd = _Reader(tree_blob, "tree")
    (node_count,) = rd.unpack(_U32)
    nodes: dict[bytes, WTBCNode] = {}
    for _ in range(node_count):
        (plen,) = rd.unpack(_NODE_HEAD)
        node_path = rd.take(plen)
        (dlen,) = rd.unpack(_U64)
        data = rd.take(dlen)
        nodes[node_path] = WTBCNode(ByteSequenceRS(data, meta["block_size"]))
    rd.done()
    if b"" not in nodes:
        raise IndexFormatError(f"{path}: tree section lacks a root node")
    for node_path, node in nodes.items():
        if node_path:
            parent = nodes.get(node_path[:-1])
            if parent is None:
                raise IndexFormatError(f"{path}: orphan tree node {node_path!r}")
            parent.children[node_path[-1]] = node

    rd = _Reader(bounds_blob, "bounds")
    ends = list(struct.unpack(f"<{meta['n_docs']}Q", rd.take(8 * meta["n_docs"])))
    rd.done()

    index = WTBCIndex(
        nodes[b""],
        SCDCParams(meta["s"], meta["c"]),
        vocab,
        CollectionStats(meta["n_docs"], meta["n_tokens"], meta["vocab_size"]),
        DocBoundaries(ends),
        block_size=meta["block_size"],
        source_bytes=meta["source_bytes"],
    )

    if meta["has_bitmaps"]:
        selected = _bitmap_ranks(vocab, meta["n_docs"], meta["epsilon"])
        rd = _Reader(bitmaps_blob, "bitmaps")
        (count,) = rd.unpack(_U32)
        if count != len(selected):
            raise IndexFormatError(
                f"{path}: bitmap count {count} does not match vocabulary ({len(selected)})"
            )
        bitmaps: dict[int, WordBitmap] = {}
        for rank in selected:
            nbits = vocab.entries[rank].freq
            buf = rd.take((nbits + 7) // 8)
            bitmaps[rank] = WordBitmap(rank, BitVectorRS(buf, nbits))
        rd.done()
        index.bitmaps = bitmaps
        index.bitmap_epsilon = meta["epsilon"]
    return index
