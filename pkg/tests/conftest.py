"""Shared fixtures: the hand-built worked example and random corpus helpers."""

from __future__ import annotations

import random

import pytest

from wtbc.corpus import CollectionStats, VocabEntry, Vocabulary
from wtbc.rankselect import DocBoundaries
from wtbc.scdc import SCDCParams
from wtbc.tree import WTBCIndex, build_nodes

# The classic walkthrough text.  Stoppers are byte values 0 and 1 (aliases
# B1, B2 below), continuers 2, 3, 4 (B3, B4, B5).  Codewords are a fixed
# table, not the dense enumeration: the walkthrough assigns three-byte codes
# to rare words even though eight words would never need them.
EXAMPLE_TEXT = "MAKE EVERYTHING AS SIMPLE AS POSSIBLE BUT NOT SIMPLER"

B1, B2, B3, B4, B5 = 0, 1, 2, 3, 4

_EXAMPLE_WORDS = [
    # (word, codeword)
    ("AS", bytes([B1])),
    ("NOT", bytes([B2])),
    ("POSSIBLE", bytes([B3, B1])),
    ("MAKE", bytes([B4, B1])),
    ("SIMPLE", bytes([B4, B2])),
    ("EVERYTHING", bytes([B5, B1])),
    ("BUT", bytes([B3, B4, B2])),
    ("SIMPLER", bytes([B4, B5, B1])),
]


@pytest.fixture(scope="session")
def worked_example() -> WTBCIndex:
    words = EXAMPLE_TEXT.split()
    table = {w: cw for w, cw in _EXAMPLE_WORDS}
    rank_of = {w: r for r, (w, _) in enumerate(_EXAMPLE_WORDS)}
    root = build_nodes([table[w] for w in words], block_size=4)
    entries = [
        VocabEntry(w, words.count(w), 1, r) for r, (w, _) in enumerate(_EXAMPLE_WORDS)
    ]
    return WTBCIndex(
        root,
        SCDCParams(2, 254),
        Vocabulary(entries),
        CollectionStats(n_docs=0, n_tokens=len(words), vocab_size=len(entries)),
        DocBoundaries([]),
        block_size=4,
        codeword_table=[cw for _, cw in _EXAMPLE_WORDS],
    )


def zipf_weights(size: int, exponent: float = 1.0) -> list[float]:
    return [1.0 / (r ** exponent) for r in range(1, size + 1)]


def zipf_corpus(
    rng: random.Random,
    n_docs: int,
    vocab_size: int = 5000,
    doc_words: tuple[int, int] = (5, 60),
    exponent: float = 1.0,
) -> list[str]:
    """Plain word documents with a Zipf-distributed vocabulary."""
    vocab = [f"w{i}" for i in range(vocab_size)]
    weights = zipf_weights(vocab_size, exponent)
    docs = []
    for _ in range(n_docs):
        length = rng.randint(*doc_words)
        docs.append(" ".join(rng.choices(vocab, weights=weights, k=length)))
    return docs


_PUNCT = [", ", ",  ", "; ", " - ", "...", "!\n", "?  ", "\n\n", ": "]


def mixed_corpus(rng: random.Random, n_docs: int, vocab_size: int = 300) -> list[str]:
    """Documents mixing words with multi-character separators and odd spacing."""
    vocab = [f"t{i}" for i in range(vocab_size)]
    weights = zipf_weights(vocab_size)
    docs = []
    for _ in range(n_docs):
        parts = []
        for _ in range(rng.randint(3, 40)):
            parts.append(rng.choice(vocab) if rng.random() < 0.7 else
                         rng.choices(vocab, weights=weights)[0])
            r = rng.random()
            if r < 0.65:
                parts.append(" ")
            elif r < 0.9:
                parts.append(rng.choice(_PUNCT))
            # else: no separator at all (words merge into one run)
        docs.append("".join(parts).strip() or "t0")
    return docs
