"""Document ingestion under the spaceless word model.

Text is split into maximal runs of Unicode alphanumerics (words) and of
everything else (separators).  A separator that is exactly one space between
two words is implicit: it is dropped here and re-inserted by detokenize, so
round trips are byte-exact.  Each document is terminated by a reserved
sentinel token that never appears literally in the input.
"""

from __future__ import annotations

import os
import re
from array import array
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import IngestionError, SentinelCollisionError, UnknownWordError

WORD = "word"
SEPARATOR = "separator"
DOC_END = "doc_end"

DEFAULT_SENTINEL = "$"
DEFAULT_DELIMITER = "%%DOC%%"

# [^\W_] is exactly the str.isalnum() character class in Python's re engine.
_RUNS = re.compile(r"[^\W_]+|[\W_]+")
_WORD_CHAR = re.compile(r"[^\W_]")


def is_word_text(text: str) -> bool:
    """True when ``text`` is word material (starts with an alphanumeric)."""
    return bool(text) and _WORD_CHAR.match(text[0]) is not None


class Token(NamedTuple):
    kind: str
    text: str


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into word/separator tokens, dropping implicit single spaces."""
    runs = [m.group() for m in _RUNS.finditer(text)]
    tokens: list[Token] = []
    last = len(runs) - 1
    for i, run in enumerate(runs):
        if _WORD_CHAR.match(run[0]):
            tokens.append(Token(WORD, run))
        elif run == " " and 0 < i < last:
            continue  # implicit single space between two words
        else:
            tokens.append(Token(SEPARATOR, run))
    return tokens


def detokenize(tokens: Iterable[Token]) -> str:
    """Inverse of tokenize: re-insert the implicit space between adjacent words."""
    parts: list[str] = []
    prev_word = False
    for kind, text in tokens:
        if kind == WORD:
            if prev_word:
                parts.append(" ")
            prev_word = True
        else:
            prev_word = False
        parts.append(text)
    return "".join(parts)


@dataclass(frozen=True)
class VocabEntry:
    word: str
    freq: int
    df: int
    rank: int


@dataclass(frozen=True)
class CollectionStats:
    n_docs: int
    n_tokens: int  # including one doc-end token per document
    vocab_size: int


class Vocabulary:
    """Frequency-ranked vocabulary; the doc-end sentinel always holds rank 0."""

    def __init__(self, entries: Sequence[VocabEntry]):
        self.entries = list(entries)
        self._rank_of = {e.word: e.rank for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self._rank_of

    def rank_of(self, word: str) -> int:
        try:
            return self._rank_of[word]
        except KeyError:
            raise UnknownWordError(f"word not in vocabulary: {word!r}") from None

    def word_at(self, rank: int) -> str:
        return self.entries[rank].word

    def entry(self, word: str) -> VocabEntry:
        return self.entries[self.rank_of(word)]

    def freq(self, word: str) -> int:
        return self.entry(word).freq

    def df(self, word: str) -> int:
        return self.entry(word).df

    def freqs_by_rank(self) -> list[int]:
        return [e.freq for e in self.entries]

    def is_word_rank(self, rank: int) -> bool:
        """True for queryable word tokens (not the sentinel, not separators)."""
        return rank > 0 and is_word_text(self.entries[rank].word)


@dataclass
class Collection:
    """Tokenized, rank-encoded concatenation of all documents."""

    token_ranks: array  # vocabulary rank per token, documents separated by rank 0
    vocab: Vocabulary
    stats: CollectionStats
    source_bytes: int  # UTF-8 size of the raw document texts


def build_collection(docs: Sequence[str], sentinel: str = DEFAULT_SENTINEL) -> Collection:
    """Tokenize documents, rank the vocabulary, and emit the sentinel-terminated stream."""
    if not docs:
        raise IngestionError("no documents to ingest")
    if all(not d for d in docs):
        raise IngestionError("every document is empty")
    doc_tokens: list[list[Token]] = []
    for i, doc in enumerate(docs, start=1):
        at = doc.find(sentinel)
        if at != -1:
            raise SentinelCollisionError(
                f"document {i} contains the reserved sentinel {sentinel!r} at offset {at}"
            )
        doc_tokens.append(tokenize(doc))

    freq: dict[str, int] = {}
    df: dict[str, int] = {}
    for tokens in doc_tokens:
        seen: set[str] = set()
        for _, text in tokens:
            freq[text] = freq.get(text, 0) + 1
            if text not in seen:
                seen.add(text)
                df[text] = df.get(text, 0) + 1

    n_docs = len(docs)
    ordered = sorted(freq, key=lambda w: (-freq[w], w))
    entries = [VocabEntry(sentinel, n_docs, n_docs, 0)]
    entries += [VocabEntry(w, freq[w], df[w], r) for r, w in enumerate(ordered, start=1)]
    vocab = Vocabulary(entries)

    ranks = array("I")
    rank_of = vocab._rank_of
    for tokens in doc_tokens:
        ranks.extend(rank_of[text] for _, text in tokens)
        ranks.append(0)

    stats = CollectionStats(n_docs=n_docs, n_tokens=len(ranks), vocab_size=len(vocab))
    source_bytes = sum(len(d.encode("utf-8")) for d in docs)
    return Collection(ranks, vocab, stats, source_bytes)


def _read_text(path: str) -> str:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IngestionError(
            f"{path}: invalid UTF-8 at byte offset {exc.start}"
        ) from exc


def split_delimited(content: str, delimiter: str = DEFAULT_DELIMITER) -> list[str]:
    """Split file content on lines that consist exactly of ``delimiter``.

    The newline preceding a delimiter line belongs to the boundary, not to the
    document, so ``doc + "\\n" + delimiter + "\\n"`` records ``doc`` exactly.
    A final terminator is optional; text after the last delimiter is a final
    document unless it is empty.
    """
    docs: list[str] = []
    pending: list[str] = []
    for piece in content.split("\n"):
        if piece == delimiter:
            docs.append("\n".join(pending))
            pending = []
        else:
            pending.append(piece)
    if pending and pending != [""]:
        docs.append("\n".join(pending))
    return docs


def load_documents(path: str, delimiter: str = DEFAULT_DELIMITER) -> list[str]:
    """Read documents from a directory (one file each) or a delimited single file."""
    if os.path.isdir(path):
        names = sorted(
            name for name in os.listdir(path)
            if os.path.isfile(os.path.join(path, name))
        )
        if not names:
            raise IngestionError(f"{path}: directory contains no files")
        return [_read_text(os.path.join(path, name)) for name in names]
    docs = split_delimited(_read_text(path), delimiter)
    if not docs:
        raise IngestionError(f"{path}: no documents found")
    return docs
