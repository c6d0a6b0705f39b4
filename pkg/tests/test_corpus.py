import random
from collections import Counter

import pytest

from conftest import mixed_corpus, zipf_corpus
from textgen import english_docs
from wtbc.corpus import (
    DOC_END,
    SEPARATOR,
    WORD,
    Token,
    build_collection,
    detokenize,
    load_documents,
    split_delimited,
    tokenize,
)
from wtbc.errors import IngestionError, SentinelCollisionError, UnknownWordError


class TestTokenize:
    def test_plain_words_single_spaces_implicit(self):
        assert tokenize("MAKE EVERYTHING AS") == [
            Token(WORD, "MAKE"),
            Token(WORD, "EVERYTHING"),
            Token(WORD, "AS"),
        ]

    def test_empty(self):
        assert tokenize("") == []
        assert detokenize([]) == ""

    def test_multi_space_separator_is_kept(self):
        assert tokenize("a,  b") == [
            Token(WORD, "a"),
            Token(SEPARATOR, ",  "),
            Token(WORD, "b"),
        ]

    def test_leading_and_trailing_spaces_are_kept(self):
        assert tokenize(" a b ") == [
            Token(SEPARATOR, " "),
            Token(WORD, "a"),
            Token(WORD, "b"),
            Token(SEPARATOR, " "),
        ]

    def test_implicit_space_restored(self):
        assert detokenize([Token(WORD, "a"), Token(WORD, "b")]) == "a b"

    def test_underscore_is_separator_material(self):
        assert tokenize("a_b") == [
            Token(WORD, "a"),
            Token(SEPARATOR, "_"),
            Token(WORD, "b"),
        ]

    def test_case_is_preserved(self):
        toks = tokenize("Foo FOO foo")
        assert [t.text for t in toks] == ["Foo", "FOO", "foo"]

    def test_round_trip_random_strings(self):
        rng = random.Random(11)
        alphabet = "ab1 ,.\n\t-éß東 "
        for _ in range(500):
            text = "".join(rng.choices(alphabet, k=rng.randint(0, 40)))
            assert detokenize(tokenize(text)) == text

    def test_round_trip_mixed_corpus(self):
        rng = random.Random(2)
        for doc in mixed_corpus(rng, 50):
            assert detokenize(tokenize(doc)) == doc

    def test_round_trip_megabyte_of_text(self):
        docs = english_docs(3, 1_100_000)
        text = "\n\n".join(docs)
        assert len(text.encode()) >= 1_000_000
        assert detokenize(tokenize(text)) == text


class TestBuildCollection:
    def test_two_doc_counting(self):
        col = build_collection(["a b", "a"])
        stats, vocab = col.stats, col.vocab
        assert stats.n_docs == 2
        assert stats.n_tokens == 5  # a b $ a $
        assert vocab.entries[0].word == "$"
        assert vocab.freq("a") == 2 and vocab.df("a") == 2
        assert vocab.freq("b") == 1 and vocab.df("b") == 1
        assert vocab.rank_of("a") == 1 and vocab.rank_of("b") == 2

    def test_walkthrough_text_token_count(self):
        col = build_collection(["MAKE EVERYTHING AS SIMPLE AS POSSIBLE BUT NOT SIMPLER"])
        assert col.stats.n_tokens == 10  # nine words plus the document end

    def test_sentinel_rank_zero_and_descending_freqs(self):
        rng = random.Random(4)
        col = build_collection(mixed_corpus(rng, 30))
        freqs = [e.freq for e in col.vocab.entries[1:]]
        assert freqs == sorted(freqs, reverse=True)
        assert col.vocab.entries[0].word == "$"
        assert col.vocab.entries[0].freq == 30

    def test_frequency_ties_break_lexicographically(self):
        col = build_collection(["b a c b a c"])
        assert col.vocab.rank_of("a") < col.vocab.rank_of("b") < col.vocab.rank_of("c")

    def test_counts_match_hash_map_oracle(self):
        rng = random.Random(8)
        docs = zipf_corpus(rng, 100, vocab_size=500)
        col = build_collection(docs)
        freq = Counter()
        df = Counter()
        for doc in docs:
            toks = [t.text for t in tokenize(doc)]
            freq.update(toks)
            df.update(set(toks))
        for e in col.vocab.entries[1:]:
            assert e.freq == freq[e.word]
            assert e.df == df[e.word]
        assert sum(e.freq for e in col.vocab.entries) == col.stats.n_tokens
        assert list(col.token_ranks).count(0) == col.stats.n_docs

    def test_zero_documents_rejected(self):
        with pytest.raises(IngestionError):
            build_collection([])
        with pytest.raises(IngestionError):
            build_collection(["", ""])

    def test_sentinel_glyph_in_input_rejected(self):
        with pytest.raises(SentinelCollisionError):
            build_collection(["price is $5"])

    def test_unknown_word_lookup(self):
        col = build_collection(["a b"])
        with pytest.raises(UnknownWordError):
            col.vocab.rank_of("zzz")


class TestIngestion:
    def test_directory_one_file_per_doc(self, tmp_path):
        (tmp_path / "b.txt").write_text("second doc", encoding="utf-8")
        (tmp_path / "a.txt").write_text("first doc", encoding="utf-8")
        assert load_documents(str(tmp_path)) == ["first doc", "second doc"]

    def test_delimited_file(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("one\n%%DOC%%\ntwo two\n%%DOC%%\n", encoding="utf-8")
        assert load_documents(str(f)) == ["one", "two two"]

    def test_delimited_file_without_final_terminator(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("one\n%%DOC%%\ntwo", encoding="utf-8")
        assert load_documents(str(f)) == ["one", "two"]

    def test_custom_delimiter(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("x\n--8<--\ny\n", encoding="utf-8")
        assert load_documents(str(f), delimiter="--8<--") == ["x", "y\n"]

    def test_split_preserves_interior_newlines(self):
        assert split_delimited("l1\nl2\n%%DOC%%\nl3") == ["l1\nl2", "l3"]

    def test_split_consecutive_delimiters_give_empty_doc(self):
        assert split_delimited("a\n%%DOC%%\n%%DOC%%\nb") == ["a", "", "b"]

    def test_split_round_trip_terminator_form(self):
        docs = ["plain", "with\nnewline", "trailing newline\n", ""]
        content = "".join(d + "\n%%DOC%%\n" for d in docs)
        assert split_delimited(content) == docs

    def test_invalid_utf8_names_byte_offset(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_bytes(b"ok \xff\xfe rest")
        with pytest.raises(IngestionError, match="byte offset 3"):
            load_documents(str(f))

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(IngestionError):
            load_documents(str(tmp_path))
