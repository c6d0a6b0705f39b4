import random

import pytest

from wtbc.errors import CapacityError, CorruptStreamError
from wtbc.scdc import (
    MAX_CODEWORD_LEN,
    SCDCParams,
    capacity,
    codeword_len,
    decode_bytes,
    decode_codeword,
    encode_rank,
    optimize_sc,
)


def brute_force_best_s(freqs):
    """Exhaustive reference for the split search."""
    best = None
    for s in range(1, 256):
        params = SCDCParams(s, 256 - s)
        if len(freqs) > capacity(params):
            continue
        cost = sum(f * codeword_len(r, params) for r, f in enumerate(freqs))
        if best is None or cost < best[0]:
            best = (cost, s)
    return best[1]


def test_params_validation():
    with pytest.raises(ValueError):
        SCDCParams(0, 256)
    with pytest.raises(ValueError):
        SCDCParams(256, 0)
    with pytest.raises(ValueError):
        SCDCParams(100, 100)


def test_codeword_len_blocks():
    for s in (1, 2, 128, 200, 255):
        params = SCDCParams(s, 256 - s)
        c = params.c
        assert codeword_len(0, params) == 1
        assert codeword_len(s - 1, params) == 1
        assert codeword_len(s, params) == 2
        assert codeword_len(s + s * c - 1, params) == 2
        assert codeword_len(s + s * c, params) == 3


def test_encode_first_codeword_is_single_zero_byte():
    for s in (1, 77, 255):
        assert encode_rank(0, SCDCParams(s, 256 - s)) == b"\x00"


def test_encode_two_byte_block_start():
    params = SCDCParams(128, 128)
    assert encode_rank(128, params) == bytes([128, 0])
    assert encode_rank(129, params) == bytes([128, 1])
    assert decode_codeword(bytes([128, 1]), params) == 129


def test_round_trip_exhaustive():
    params = SCDCParams(190, 66)
    for rank in range(100_000):
        cw = encode_rank(rank, params)
        assert decode_codeword(cw, params) == rank
        got, end = decode_bytes(cw, params)
        assert (got, end) == (rank, len(cw))


def test_round_trip_random_params_large_ranks():
    rng = random.Random(1)
    for _ in range(20):
        s = rng.randint(1, 255)
        params = SCDCParams(s, 256 - s)
        cap = capacity(params)
        for _ in range(200):
            rank = rng.randrange(min(cap, 10**6))
            assert decode_codeword(encode_rank(rank, params), params) == rank


def test_prefix_freeness_and_monotone_lengths():
    params = SCDCParams(3, 253)
    cws = [encode_rank(r, params) for r in range(2000)]
    assert len(set(cws)) == len(cws)
    for a, b in zip(cws, cws[1:]):
        assert len(a) <= len(b)
    # a stopper ends exactly one codeword: no codeword prefixes another
    sample = set(cws[:300])
    for cw in sample:
        for other in sample:
            if cw is not other:
                assert not other.startswith(cw)


def test_stopper_continuer_structure():
    params = SCDCParams(17, 239)
    for rank in (0, 5, 17, 500, 4_000, 70_000):
        cw = encode_rank(rank, params)
        assert all(b >= params.s for b in cw[:-1])
        assert cw[-1] < params.s


def test_decode_stream_sequence():
    params = SCDCParams(9, 247)
    ranks = [0, 3, 8, 9, 1000, 123456]
    stream = b"".join(encode_rank(r, params) for r in ranks)
    pos = 0
    out = []
    while pos < len(stream):
        rank, pos = decode_bytes(stream, params, pos)
        out.append(rank)
    assert out == ranks


def test_decode_truncated_stream_errors():
    params = SCDCParams(4, 252)
    cw = encode_rank(5000, params)
    with pytest.raises(CorruptStreamError):
        decode_bytes(cw[:-1], params)


def test_capacity_error_beyond_five_bytes():
    params = SCDCParams(255, 1)  # capacity 5 * 255 = 1275
    assert capacity(params) == 1275
    assert codeword_len(1274, params) == MAX_CODEWORD_LEN
    with pytest.raises(CapacityError):
        codeword_len(1275, params)


def test_optimize_single_word_prefers_smallest_s():
    assert optimize_sc([1]).s == 1


def test_optimize_uniform_256_matches_brute_force():
    freqs = [7] * 256
    assert optimize_sc(freqs).s == brute_force_best_s(freqs)


def test_optimize_zipf_matches_brute_force():
    rng = random.Random(42)
    for size in (10, 1000, 100_000):
        freqs = sorted((int(1e6 / (r + 1)) + rng.randint(0, 3) for r in range(size)), reverse=True)
        best = optimize_sc(freqs)
        assert best.s == brute_force_best_s(freqs)


def test_optimize_never_worse_than_any_split():
    rng = random.Random(9)
    freqs = sorted((rng.randint(1, 10_000) for _ in range(5000)), reverse=True)
    chosen = optimize_sc(freqs)
    chosen_cost = sum(f * codeword_len(r, chosen) for r, f in enumerate(freqs))
    for s in (1, 2, 50, 128, 200, 254, 255):
        params = SCDCParams(s, 256 - s)
        if len(freqs) > capacity(params):
            continue
        cost = sum(f * codeword_len(r, params) for r, f in enumerate(freqs))
        assert chosen_cost <= cost


def test_optimize_excludes_splits_that_cannot_cover():
    # 2000 ranks cannot be encoded with s = 255 (capacity 1275); the optimum
    # must still be returned from the feasible splits.
    freqs = [1] * 2000
    params = optimize_sc(freqs)
    assert len(freqs) <= capacity(params)
