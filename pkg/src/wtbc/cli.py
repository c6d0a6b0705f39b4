"""Command-line interface: build, query, extract, stats, bench."""

from __future__ import annotations

import argparse
import csv
import sys
import time

from . import retrieval, storage
from .corpus import DEFAULT_DELIMITER, build_collection, load_documents
from .errors import WTBCError
from .rankselect import DEFAULT_BLOCK_SIZE
from .retrieval import DRBConfig, Query, ScoredDoc
from .tree import DEFAULT_SNIPPET_WINDOW, WTBCIndex, build_index


def _load(path: str) -> WTBCIndex:
    return storage.load_index(path)


def cmd_build(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    docs = load_documents(args.input, args.delimiter)
    collection = build_collection(docs)
    index = build_index(collection, block_size=args.block_size)
    if args.drb:
        index.bitmaps = retrieval.build_bitmaps(index, DRBConfig(args.epsilon))
        index.bitmap_epsilon = args.epsilon
    storage.save_index(index, args.output)
    elapsed = time.perf_counter() - started

    meta = storage.read_header(args.output)
    file_bytes = meta["header_bytes"] + sum(meta["section_bytes"].values())
    ratio = file_bytes / index.source_bytes if index.source_bytes else float("nan")
    print(f"documents: {index.n_docs}  tokens: {index.n_tokens}  vocabulary: {len(index.vocab)}")
    print(f"(s, c): ({index.params.s}, {index.params.c})")
    print(f"index bytes: {file_bytes}  source bytes: {index.source_bytes}  "
          f"compression ratio: {100.0 * ratio:.1f}%")
    print(f"build time: {elapsed:.2f} s")
    return 0


def _run_query(index: WTBCIndex, args: argparse.Namespace, query: Query) -> list[ScoredDoc]:
    if args.algo == "dr":
        return retrieval.topk_dr(index, query, query.k)
    if args.algo == "drb":
        if index.bitmaps is None:
            raise WTBCError("index was built without bitmaps; rebuild with --drb")
        if query.mode == "and":
            return retrieval.topk_drb_and(index, index.bitmaps, query, query.k)
        return retrieval.topk_drb_or(index, index.bitmaps, query, query.k)
    if not args.corpus:
        raise WTBCError("--algo oracle needs --corpus pointing at the original input")
    docs = load_documents(args.corpus, args.delimiter)
    return retrieval.topk_oracle(docs, query, query.k)


def cmd_query(args: argparse.Namespace) -> int:
    index = _load(args.index)
    query = Query.parse(args.query, mode=args.mode, k=args.k)
    for rank, hit in enumerate(_run_query(index, args, query), start=1):
        print(f"{rank}\t{hit.doc}\t{hit.score:.6f}")
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    index = _load(args.index)
    if args.doc is not None:
        text = index.extract_doc(args.doc)
    elif args.pos is not None:
        lo, _, hi = args.pos.partition("..")
        a = int(lo)
        b = int(hi) if hi else a
        text = index.decode_range(a, b)
    else:
        word, _, j = args.hit.partition(",")
        text = index.snippet(word, int(j) if j else 1, args.window)
    sys.stdout.write(text)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    meta = storage.read_header(args.index)
    index = _load(args.index)
    sections = meta["section_bytes"]
    file_bytes = meta["header_bytes"] + sum(sections.values())
    source = index.source_bytes
    print(f"documents (N):        {index.n_docs}")
    print(f"tokens (n):           {index.n_tokens}")
    print(f"tokens excl. doc-end: {index.n_tokens - index.n_docs}")
    print(f"vocabulary (V):       {len(index.vocab)}")
    print(f"(s, c):               ({index.params.s}, {index.params.c})")
    print(f"block size:           {index.block_size}")
    print(f"header bytes:         {meta['header_bytes']}")
    for name in ("vocabulary", "tree", "bounds", "bitmaps"):
        print(f"{name + ' bytes:':<22}{sections[name]}")
    print(f"file bytes:           {file_bytes}")
    print(f"source bytes:         {source}")
    if source:
        counters = index.counter_bytes()
        print(f"compression ratio:    {100.0 * file_bytes / source:.1f}%")
        print(f"counter overhead:     {100.0 * counters / source:.2f}%")
        print(f"bitmap overhead:      {100.0 * sections['bitmaps'] / source:.2f}%")
    if meta["has_bitmaps"]:
        print(f"bitmap epsilon:       {meta['epsilon']:g}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    index = _load(args.index)
    docs = load_documents(args.corpus, args.delimiter) if args.corpus else None
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["query", "n_words", "mode", "algo", "k", "mean_ms", "results"])
    with open(args.queries, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    for line in lines:
        query = Query.parse(line, mode=args.mode, k=args.k)
        runs = []
        results: list[ScoredDoc] = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            if args.algo == "oracle":
                results = retrieval.topk_oracle(docs or [], query, query.k)
            else:
                results = _run_query(index, args, query)
            runs.append((time.perf_counter() - started) * 1000.0)
        writer.writerow([
            line, len(query.words), args.mode, args.algo, args.k,
            f"{sum(runs) / len(runs):.3f}", len(results),
        ])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wtbc",
        description="Compressed self-indexing document retrieval over a wavelet tree on bytecodes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a directory or a delimited file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--drb", action="store_true", help="also build per-word tf bitmaps")
    p.add_argument("--epsilon", type=float, default=1e-6,
                   help="idf threshold below which no bitmap is stored")
    p.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    p.add_argument("--delimiter", default=DEFAULT_DELIMITER)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run a top-k query, one TSV row per hit")
    p.add_argument("index")
    p.add_argument("query")
    p.add_argument("--mode", choices=("and", "or"), default="or")
    p.add_argument("--algo", choices=("dr", "drb", "oracle"), default="dr")
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--corpus", help="original input (required for --algo oracle)")
    p.add_argument("--delimiter", default=DEFAULT_DELIMITER)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("extract", help="print a document, a token range, or a hit snippet")
    p.add_argument("index")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--doc", type=int)
    group.add_argument("--pos", help="token range A..B")
    group.add_argument("--hit", help="word,j — snippet around the j-th occurrence")
    p.add_argument("--window", type=int, default=DEFAULT_SNIPPET_WINDOW)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="report sizes and overheads of an index file")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="time queries from a file, CSV per query")
    p.add_argument("index")
    p.add_argument("queries")
    p.add_argument("--mode", choices=("and", "or"), default="or")
    p.add_argument("--algo", choices=("dr", "drb", "oracle"), default="dr")
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--corpus", help="original input (required for --algo oracle)")
    p.add_argument("--delimiter", default=DEFAULT_DELIMITER)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WTBCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
