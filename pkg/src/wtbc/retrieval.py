"""tf-idf scoring and top-k ranked retrieval.

Two engines answer conjunctive (AND) and bag-of-words (OR) queries over the
index:

* the segment engine keeps a priority queue of boundary-aligned document
  runs, always splitting the best-scoring run at the document boundary
  nearest its midpoint, so documents pop out in non-increasing score order
  and the search can stop after k of them;
* the bitmap engine stores one bit pattern per sufficiently rare word
  (a 1 opens each document, a 0 per extra occurrence) and walks candidate
  documents directly, collecting the k best.

``topk_oracle`` recomputes everything from the raw documents by linear scan
and is the ground truth the engines are tested against.

Everywhere the tie-break is (score desc, doc id asc); scores are sums of
tf * idf in query-word order, so equal inputs give bit-equal scores.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .corpus import tokenize, WORD, Vocabulary
from .errors import UnknownWordError
from .rankselect import BitBuilder, BitVectorRS
from .tree import WTBCIndex


@dataclass(frozen=True)
class Query:
    """A parsed query; duplicate words collapse to a single mention."""

    words: tuple[str, ...]
    mode: str = "or"  # "and" | "or"
    k: int = 10

    def __post_init__(self):
        if self.mode not in ("and", "or"):
            raise ValueError(f"mode must be 'and' or 'or', got {self.mode!r}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        deduped = tuple(dict.fromkeys(self.words))
        if not deduped:
            raise ValueError("query needs at least one word")
        object.__setattr__(self, "words", deduped)

    @classmethod
    def parse(cls, text: str, mode: str = "or", k: int = 10) -> "Query":
        """Extract query words with the ingestion tokenizer; separators are ignored."""
        words = tuple(t.text for t in tokenize(text) if t.kind == WORD)
        return cls(words, mode, k)


@dataclass(frozen=True)
class ScoredDoc:
    doc: int
    score: float


@dataclass
class Segment:
    """A run of whole documents, positions start_pos..end_pos in the root."""

    start_pos: int
    end_pos: int
    score: float
    ndocs: int
    first_doc: int
    # Per query word: occurrences inside the segment, and occurrences before it.
    counts: tuple[int, ...] = ()
    base: tuple[int, ...] = ()


def idf(vocab: Vocabulary, word: str, n_docs: int) -> float:
    """log(N / df); 0 for words present in every document."""
    return _idf_value(n_docs, vocab.df(word))


def _idf_value(n_docs: int, df: int) -> float:
    return math.log(n_docs / df)


def _score(counts: Sequence[int], idfs: Sequence[float]) -> float:
    total = 0.0
    for c, w in zip(counts, idfs):
        total += c * w
    return total


def score_segment(index: WTBCIndex, words: Sequence[str], seg: Segment) -> float:
    """Sum over query words of occurrences-in-segment times idf (0 if absent)."""
    total = 0.0
    for word in words:
        if word in index.vocab:
            count = index.count_range(word, seg.start_pos, seg.end_pos)
            total += count * idf(index.vocab, word, index.n_docs)
    return total


def _root_segment(index: WTBCIndex, words: Sequence[str]) -> Segment:
    counts = tuple(index.count_prefix(w, index.n_tokens) for w in words)
    idfs = [idf(index.vocab, w, index.n_docs) for w in words]
    return Segment(
        start_pos=1,
        end_pos=index.n_tokens,
        score=_score(counts, idfs),
        ndocs=index.n_docs,
        first_doc=1,
        counts=counts,
        base=(0,) * len(words),
    )


def split_segment(
    index: WTBCIndex, words: Sequence[str], seg: Segment
) -> tuple[Segment, Segment]:
    """Split at the document boundary nearest the positional midpoint.

    Only the left half is counted against the tree; the right half's counts
    follow by subtraction, which keeps one split at one count per word.
    """
    if seg.ndocs < 2:
        raise ValueError("cannot split a single-document segment")
    if not seg.counts or not seg.base:
        base = tuple(index.count_prefix(w, seg.start_pos - 1) for w in words)
        counts = tuple(
            index.count_prefix(w, seg.end_pos) - b for w, b in zip(words, base)
        )
        seg = Segment(seg.start_pos, seg.end_pos, seg.score, seg.ndocs, seg.first_doc,
                      counts, base)
    idfs = [idf(index.vocab, w, index.n_docs) for w in words]
    mid = (seg.start_pos + seg.end_pos) // 2
    d = index.bounds.doc_rank(mid)
    d = max(seg.first_doc, min(d, seg.first_doc + seg.ndocs - 2))
    boundary = index.bounds.doc_select(d)

    left_prefix = tuple(index.count_prefix(w, boundary) for w in words)
    left_counts = tuple(p - b for p, b in zip(left_prefix, seg.base))
    right_counts = tuple(c - lc for c, lc in zip(seg.counts, left_counts))
    left = Segment(
        start_pos=seg.start_pos,
        end_pos=boundary,
        score=_score(left_counts, idfs),
        ndocs=d - seg.first_doc + 1,
        first_doc=seg.first_doc,
        counts=left_counts,
        base=seg.base,
    )
    right = Segment(
        start_pos=boundary + 1,
        end_pos=seg.end_pos,
        score=_score(right_counts, idfs),
        ndocs=seg.ndocs - left.ndocs,
        first_doc=d + 1,
        counts=right_counts,
        base=left_prefix,
    )
    return left, right


def topk_dr(index: WTBCIndex, query: Query, k: int) -> list[ScoredDoc]:
    """Best-first segment splitting; emits documents in non-increasing score order."""
    words = [w for w in query.words if w in index.vocab]
    if query.mode == "and" and len(words) < len(query.words):
        return []  # a conjunctive query with an unknown word matches nothing
    if not words or k == 0:
        return []

    root = _root_segment(index, words)
    results: list[ScoredDoc] = []
    heap: list[tuple[float, int, Segment]] = []

    def admit(seg: Segment) -> None:
        if seg.score <= 0.0:
            return  # nothing of positive idf inside
        if query.mode == "and" and any(c == 0 for c in seg.counts):
            return
        heapq.heappush(heap, (-seg.score, seg.start_pos, seg))

    admit(root)
    while heap and len(results) < k:
        _, _, seg = heapq.heappop(heap)
        if seg.ndocs == 1:
            results.append(ScoredDoc(seg.first_doc, seg.score))
        else:
            left, right = split_segment(index, words, seg)
            admit(left)
            admit(right)
    return results


@dataclass(frozen=True)
class DRBConfig:
    epsilon: float = 1e-6  # words at or below this idf get no bitmap


@dataclass
class WordBitmap:
    """Per-word document/term-frequency encoding over freq(word) bit positions."""

    word_id: int
    bits: BitVectorRS


class Triplet(NamedTuple):
    word_id: int
    ndocs: int  # documents not yet processed for this word
    i: int  # bitmap position of the 1 opening the next unprocessed document


def build_bitmaps(index: WTBCIndex, config: DRBConfig = DRBConfig()) -> dict[int, WordBitmap]:
    """One pass over the token stream: a 1 per new document, a 0 per repeat."""
    vocab = index.vocab
    n_docs = index.n_docs
    selected = {
        e.rank
        for e in vocab.entries
        if vocab.is_word_rank(e.rank) and _idf_value(n_docs, e.df) > config.epsilon
    }
    builders: dict[int, BitBuilder] = {r: BitBuilder() for r in selected}
    last_doc = {r: 0 for r in selected}
    doc = 1
    for rank in index.ranks_in_range(1, index.n_tokens):
        if rank == 0:
            doc += 1
        elif rank in builders:
            builders[rank].append(last_doc[rank] != doc)
            last_doc[rank] = doc
    return {r: WordBitmap(r, b.build()) for r, b in builders.items()}


def bitmap_tf_vector(bm: WordBitmap) -> list[int]:
    """Term frequencies per document, recovered from the gap structure."""
    bits = bm.bits
    tfs = []
    i = bits.next1(0)
    while i <= bits.nbits:
        nxt = bits.next1(i)
        tfs.append(nxt - i)
        i = nxt
    return tfs


def _surviving(
    index: WTBCIndex, bitmaps: dict[int, WordBitmap], query: Query
) -> tuple[list[str], list[int], bool]:
    """Query words that have bitmaps; flags whether any word was out of vocabulary."""
    words: list[str] = []
    ids: list[int] = []
    missing = False
    for w in query.words:
        if w not in index.vocab:
            missing = True
            continue
        rank = index.vocab.rank_of(w)
        if rank in bitmaps:
            words.append(w)
            ids.append(rank)
    return words, ids, missing


def drb_and_steps(
    index: WTBCIndex, bitmaps: dict[int, WordBitmap], words: Sequence[str]
) -> Iterator[tuple[int, float | None, list[Triplet]]]:
    """Candidate-document steps of the conjunctive bitmap search.

    Yields (doc, score-or-None-if-rejected, recomputed triplets) until the
    word with fewest remaining documents runs out.
    """
    vocab = index.vocab
    ids = [vocab.rank_of(w) for w in words]
    idfs = [idf(vocab, w, index.n_docs) for w in words]
    bms = [bitmaps[i].bits for i in ids]
    state = {wid: (vocab.entries[wid].df, 1) for wid in ids}  # wid -> (ndocs, i)

    while True:
        chosen = min(range(len(ids)), key=lambda q: (state[ids[q]][0], ids[q]))
        wid = ids[chosen]
        _, i = state[wid]
        p = index.locate(words[chosen], i)
        d = index.doc_of(p)
        s, e = index.doc_bounds(d)

        tfs = [0] * len(ids)
        counts_e = [0] * len(ids)
        rejected = False
        for q, w in enumerate(words):
            if q == chosen:
                nxt = bms[q].next1(i)
                tfs[q] = nxt - i
                counts_e[q] = nxt - 1
            else:
                ce = index.count_prefix(w, e)
                counts_e[q] = ce
                tfs[q] = ce - index.count_prefix(w, s)
                if tfs[q] == 0:
                    rejected = True
        score = None if rejected else _score(tfs, idfs)

        triplets = []
        exhausted = False
        for q, w_id in enumerate(ids):
            ndocs = vocab.entries[w_id].df - bms[q].rank1(counts_e[q])
            state[w_id] = (ndocs, counts_e[q] + 1)
            triplets.append(Triplet(w_id, ndocs, counts_e[q] + 1))
            exhausted = exhausted or ndocs == 0
        yield d, score, triplets
        if exhausted:
            return


def topk_drb_and(
    index: WTBCIndex, bitmaps: dict[int, WordBitmap], query: Query, k: int
) -> list[ScoredDoc]:
    """Conjunctive search driven by the word with fewest unprocessed documents."""
    words, _, missing = _surviving(index, bitmaps, query)
    if missing or not words or k == 0:
        return []
    best: list[tuple[float, int]] = []  # min-heap of (score, -doc): worst first
    for doc, score, _ in drb_and_steps(index, bitmaps, words):
        if score is None:
            continue
        item = (score, -doc)
        if len(best) < k:
            heapq.heappush(best, item)
        elif item > best[0]:
            heapq.heapreplace(best, item)
    ordered = sorted(best, key=lambda t: (-t[0], -t[1]))
    return [ScoredDoc(-nd, sc) for sc, nd in ordered]


def topk_drb_or(
    index: WTBCIndex, bitmaps: dict[int, WordBitmap], query: Query, k: int
) -> list[ScoredDoc]:
    """Bag-of-words: walk every document of every surviving word, then rank."""
    words, ids, _ = _surviving(index, bitmaps, query)
    acc: dict[int, float] = {}
    for w, wid in zip(words, ids):
        bits = bitmaps[wid].bits
        w_idf = idf(index.vocab, w, index.n_docs)
        i = bits.next1(0)
        while i <= bits.nbits:
            nxt = bits.next1(i)
            doc = index.doc_of(index.locate(w, i))
            acc[doc] = acc.get(doc, 0.0) + (nxt - i) * w_idf
            i = nxt
    ordered = sorted(acc.items(), key=lambda kv: (-kv[1], kv[0]))
    return [ScoredDoc(d, s) for d, s in ordered[:k]]


class OracleScorer:
    """Per-document term tables scanned from the raw texts."""

    def __init__(self, docs: Sequence[str]):
        self.n_docs = len(docs)
        self.doc_tfs: list[dict[str, int]] = []
        self.dfs: dict[str, int] = {}
        for doc in docs:
            tf: dict[str, int] = {}
            for kind, text in tokenize(doc):
                if kind == WORD:
                    tf[text] = tf.get(text, 0) + 1
            self.doc_tfs.append(tf)
            for w in tf:
                self.dfs[w] = self.dfs.get(w, 0) + 1

    def topk(self, query: Query, k: int) -> list[ScoredDoc]:
        words = [w for w in query.words if w in self.dfs]
        if query.mode == "and" and len(words) < len(query.words):
            return []
        if not words:
            return []
        idfs = [_idf_value(self.n_docs, self.dfs[w]) for w in words]

        results: list[tuple[float, int]] = []
        for d, tf in enumerate(self.doc_tfs, start=1):
            score = 0.0
            hit_all = True
            for w, w_idf in zip(words, idfs):
                c = tf.get(w, 0)
                if c:
                    score += c * w_idf
                else:
                    hit_all = False
            if query.mode == "and" and not hit_all:
                continue
            if score > 0.0:
                results.append((-score, d))
        results.sort()
        return [ScoredDoc(d, -neg) for neg, d in results[:k]]


def topk_oracle(docs: Sequence[str], query: Query, k: int) -> list[ScoredDoc]:
    """Ground truth by linear scan of the raw documents."""
    return OracleScorer(docs).topk(query, k)
