"""Wavelet tree on bytecodes: the self-indexing representation of the collection.

Each token's codeword is spread over the tree: the root holds the first byte
of every codeword in text order, and the child for continuer value ``b``
holds the next byte of every codeword that passed through ``b``.  rank on a
node maps a position down one level, select maps it back up, which yields
decode/locate/count without storing the original text.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import scdc
from .corpus import (
    DOC_END,
    SEPARATOR,
    WORD,
    Collection,
    CollectionStats,
    Token,
    Vocabulary,
    detokenize,
    is_word_text,
)
from .errors import OutOfRangeError, NotFoundError
from .rankselect import DEFAULT_BLOCK_SIZE, ByteSequenceRS, DocBoundaries
from .scdc import SCDCParams

DEFAULT_DOC_END_MARKER = "\n$\n"
DEFAULT_SNIPPET_WINDOW = 10


@dataclass
class WTBCNode:
    seq: ByteSequenceRS
    children: dict[int, "WTBCNode"] = field(default_factory=dict)


class WTBCIndex:
    """Immutable index over one document collection; every query is read-only."""

    def __init__(
        self,
        root: WTBCNode,
        params: SCDCParams,
        vocab: Vocabulary,
        stats: CollectionStats,
        bounds: DocBoundaries,
        *,
        block_size: int = DEFAULT_BLOCK_SIZE,
        source_bytes: int = 0,
        codeword_table: list[bytes] | None = None,
    ):
        self.root = root
        self.params = params
        self.vocab = vocab
        self.stats = stats
        self.bounds = bounds
        self.block_size = block_size
        self.source_bytes = source_bytes
        if codeword_table is None:
            # The dense enumeration: codewords are recovered arithmetically.
            self.codewords = [scdc.encode_rank(r, params) for r in range(len(vocab))]
            self._rank_of_cw = None
        else:
            # An explicit rank -> codeword table (decode goes through a dict).
            self.codewords = list(codeword_table)
            self._rank_of_cw = {cw: r for r, cw in enumerate(self.codewords)}
        self.bitmaps = None  # populated by retrieval.build_bitmaps via cli
        self.bitmap_epsilon: float | None = None

    # -- basic facts ---------------------------------------------------------

    @property
    def n_tokens(self) -> int:
        return self.stats.n_tokens

    @property
    def n_docs(self) -> int:
        return self.stats.n_docs

    def _check_pos(self, p: int) -> None:
        if not 1 <= p <= self.n_tokens:
            raise OutOfRangeError(f"position {p} not in [1, {self.n_tokens}]")

    def _decode_rank(self, codeword: bytes) -> int:
        if self._rank_of_cw is not None:
            return self._rank_of_cw[codeword]
        return scdc.decode_codeword(codeword, self.params)

    # -- decode --------------------------------------------------------------

    def rank_at(self, p: int) -> int:
        """Vocabulary rank of the token at position p."""
        self._check_pos(p)
        node = self.root
        pos = p
        path = bytearray()
        while True:
            byte = node.seq.byte_at(pos)
            path.append(byte)
            if self.params.is_stopper(byte):
                return self._decode_rank(bytes(path))
            pos = node.seq.rank(byte, pos)
            node = node.children[byte]

    def decode_at(self, p: int) -> str:
        """Token text at position p (the sentinel glyph for document ends)."""
        return self.vocab.word_at(self.rank_at(p))

    def ranks_in_range(self, a: int, b: int) -> Iterator[int]:
        """Ranks of tokens a..b, amortized O(codeword bytes) per token.

        Byte order inside every node follows text order, so after one rank
        computation per first visit, each node is read with a running cursor.
        """
        self._check_pos(a)
        self._check_pos(b)
        if a > b:
            raise OutOfRangeError(f"empty range [{a}, {b}]")
        cursors: dict[bytes, int] = {b"": a}
        is_stopper = self.params.is_stopper
        for _ in range(b - a + 1):
            node = self.root
            path = b""
            pos = cursors[path]
            cursors[path] = pos + 1
            while True:
                byte = node.seq.byte_at(pos)
                path += bytes([byte])
                if is_stopper(byte):
                    yield self._decode_rank(path)
                    break
                child_pos = cursors.get(path)
                if child_pos is None:
                    child_pos = node.seq.rank(byte, pos)
                cursors[path] = child_pos + 1
                node = node.children[byte]
                pos = child_pos

    def tokens_in_range(self, a: int, b: int) -> Iterator[Token]:
        # Rank 0 is the document-end sentinel only when boundaries exist.
        sentinel_rank = 0 if len(self.bounds) else -1
        for rank in self.ranks_in_range(a, b):
            if rank == sentinel_rank:
                yield Token(DOC_END, self.vocab.word_at(0))
            else:
                text = self.vocab.word_at(rank)
                yield Token(WORD if is_word_text(text) else SEPARATOR, text)

    def decode_range(self, a: int, b: int, doc_end_marker: str = DEFAULT_DOC_END_MARKER) -> str:
        """Detokenized text of positions a..b; document ends render as the marker."""
        rendered = (
            Token(SEPARATOR, doc_end_marker) if tok.kind == DOC_END else tok
            for tok in self.tokens_in_range(a, b)
        )
        return detokenize(rendered)

    # -- locate / count ------------------------------------------------------

    def _codeword_path(self, word: str) -> tuple[list[WTBCNode], bytes]:
        """Nodes along a word's codeword (root first) and the codeword bytes."""
        cw = self.codewords[self.vocab.rank_of(word)]
        nodes = [self.root]
        for byte in cw[:-1]:
            nodes.append(nodes[-1].children[byte])
        return nodes, cw

    def locate(self, word: str, j: int) -> int:
        """Text position of the j-th occurrence of ``word``."""
        nodes, cw = self._codeword_path(word)
        if not 1 <= j <= self.vocab.freq(word):
            raise NotFoundError(f"{word!r} occurs {self.vocab.freq(word)} times, asked for #{j}")
        pos = j
        for level in range(len(cw) - 1, -1, -1):
            pos = nodes[level].seq.select(cw[level], pos)
        return pos

    def count_prefix(self, word: str, p: int) -> int:
        """Occurrences of ``word`` in positions 1..p."""
        if not 0 <= p <= self.n_tokens:
            raise OutOfRangeError(f"position {p} not in [0, {self.n_tokens}]")
        nodes, cw = self._codeword_path(word)
        pos = p
        for level, byte in enumerate(cw):
            pos = nodes[level].seq.rank(byte, pos)
        return pos

    def count_range(self, word: str, a: int, b: int) -> int:
        """Occurrences of ``word`` in positions a..b."""
        if not 1 <= a <= b <= self.n_tokens:
            raise OutOfRangeError(f"range [{a}, {b}] not within [1, {self.n_tokens}]")
        return self.count_prefix(word, b) - self.count_prefix(word, a - 1)

    # -- document coordinates --------------------------------------------------

    def doc_of(self, p: int) -> int:
        """Document containing position p (a boundary belongs to the doc it ends)."""
        self._check_pos(p)
        if self.bounds.is_boundary(p):
            return self.bounds.doc_rank(p)
        return 1 + self.bounds.doc_rank(p)

    def doc_bounds(self, d: int) -> tuple[int, int]:
        """(s, e): document d's tokens occupy positions s+1 .. e, e being its end mark."""
        if not 1 <= d <= self.n_docs:
            raise OutOfRangeError(f"document {d} not in [1, {self.n_docs}]")
        return self.bounds.doc_select(d - 1), self.bounds.doc_select(d)

    def extract_doc(self, d: int) -> str:
        """Original text of document d."""
        s, e = self.doc_bounds(d)
        if e - s == 1:  # empty document: only its end mark
            return ""
        return self.decode_range(s + 1, e - 1)

    def snippet(self, word: str, j: int, window: int = DEFAULT_SNIPPET_WINDOW) -> str:
        """Text around the j-th occurrence of ``word``, clipped to its document."""
        p = self.locate(word, j)
        s, e = self.doc_bounds(self.doc_of(p))
        return self.decode_range(max(s + 1, p - window), min(e - 1, p + window))

    # -- whole-tree walks ------------------------------------------------------

    def nodes(self) -> Iterator[tuple[bytes, WTBCNode]]:
        """(path, node) pairs in breadth-first order, children by byte value."""
        queue = deque([(b"", self.root)])
        while queue:
            path, node = queue.popleft()
            yield path, node
            for byte in sorted(node.children):
                queue.append((path + bytes([byte]), node.children[byte]))

    def tree_bytes(self) -> int:
        return sum(len(node.seq) for _, node in self.nodes())

    def counter_bytes(self) -> int:
        return sum(node.seq.counter_bytes for _, node in self.nodes())


def build_nodes(
    codeword_stream: Iterable[bytes],
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> WTBCNode:
    """Distribute codeword bytes over the tree, one buffer per node path."""
    buffers: dict[bytes, bytearray] = {b"": bytearray()}
    for cw in codeword_stream:
        path = b""
        for byte in cw:
            buf = buffers.get(path)
            if buf is None:
                buf = buffers[path] = bytearray()
            buf.append(byte)
            path += bytes([byte])
    nodes = {
        path: WTBCNode(ByteSequenceRS(bytes(buf), block_size))
        for path, buf in buffers.items()
    }
    for path, node in nodes.items():
        if path:
            nodes[path[:-1]].children[path[-1]] = node
    return nodes[b""]


def build_index(
    collection: Collection,
    *,
    params: SCDCParams | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
    exclude_sentinel_from_opt: bool = False,
) -> WTBCIndex:
    """Encode the collection with (s,c)-dense code and build the wavelet tree."""
    vocab = collection.vocab
    if params is None:
        freqs = vocab.freqs_by_rank()
        if exclude_sentinel_from_opt:
            freqs = [0] + freqs[1:]
        params = scdc.optimize_sc(freqs)
    codewords = [scdc.encode_rank(r, params) for r in range(len(vocab))]

    token_ranks = collection.token_ranks
    root = build_nodes((codewords[rank] for rank in token_ranks), block_size)
    ends = [p for p, rank in enumerate(token_ranks, start=1) if rank == 0]

    return WTBCIndex(
        root,
        params,
        vocab,
        collection.stats,
        DocBoundaries(ends),
        block_size=block_size,
        source_bytes=collection.source_bytes,
    )
