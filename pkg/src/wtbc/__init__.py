"""Compressed self-indexing document retrieval.

A document collection is stored as a wavelet tree on bytecodes over its
(s,c)-dense-code compression.  The same structure answers snippet
extraction, full-text locate/count, and top-k ranked AND/OR queries in
essentially the space of the compressed text.
"""

from .corpus import (
    Collection,
    CollectionStats,
    Token,
    VocabEntry,
    Vocabulary,
    build_collection,
    detokenize,
    load_documents,
    tokenize,
)
from .errors import (
    CapacityError,
    CorruptStreamError,
    IndexFormatError,
    IngestionError,
    NotFoundError,
    OutOfRangeError,
    SentinelCollisionError,
    UnknownWordError,
    WTBCError,
)
from .retrieval import (
    DRBConfig,
    Query,
    ScoredDoc,
    Segment,
    WordBitmap,
    build_bitmaps,
    idf,
    score_segment,
    split_segment,
    topk_dr,
    topk_drb_and,
    topk_drb_or,
    topk_oracle,
)
from .scdc import SCDCParams, codeword_len, decode_bytes, encode_rank, optimize_sc
from .storage import load_index, save_index
from .tree import WTBCIndex, build_index

__version__ = "0.1.0"
