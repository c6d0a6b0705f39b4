"""(s,c)-dense code: a byte-oriented prefix-free code for frequency-ranked words.

The byte alphabet is split into ``s`` stopper values ``[0, s)`` and
``c = 256 - s`` continuer values ``[s, 256)``.  A codeword is zero or more
continuers followed by exactly one stopper, so codeword boundaries are
self-delimiting.  Rank 0 gets the first 1-byte codeword, ranks grow through
1-byte, 2-byte, 3-byte... blocks of sizes s, s*c, s*c^2, ...
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError, CorruptStreamError

# Longest codeword we ever emit; 5 bytes cover > 10^10 ranks for any split.
MAX_CODEWORD_LEN = 5


@dataclass(frozen=True)
class SCDCParams:
    """The stopper/continuer split of the byte alphabet."""

    s: int
    c: int

    def __post_init__(self) -> None:
        if self.s < 1 or self.c < 1 or self.s + self.c != 256:
            raise ValueError(f"invalid (s, c) split: ({self.s}, {self.c})")

    def is_stopper(self, byte: int) -> bool:
        return byte < self.s


def _block_bounds(params: SCDCParams):
    """Yield (first_rank, block_size, length) for each codeword-length block."""
    base = 0
    size = params.s
    for length in range(1, MAX_CODEWORD_LEN + 1):
        yield base, size, length
        base += size
        size *= params.c


def capacity(params: SCDCParams) -> int:
    """Number of ranks encodable within MAX_CODEWORD_LEN bytes."""
    return sum(size for _, size, _ in _block_bounds(params))


def codeword_len(rank: int, params: SCDCParams) -> int:
    """Byte length of the codeword assigned to ``rank``."""
    if rank < 0:
        raise ValueError(f"rank must be >= 0, got {rank}")
    for base, size, length in _block_bounds(params):
        if rank < base + size:
            return length
    raise CapacityError(
        f"rank {rank} exceeds the {MAX_CODEWORD_LEN}-byte capacity of "
        f"(s, c) = ({params.s}, {params.c})"
    )


def encode_rank(rank: int, params: SCDCParams) -> bytes:
    """Codeword bytes for ``rank``: continuer digits (base c, offset +s), then a stopper."""
    length = codeword_len(rank, params)
    m = rank - _base_of(length, params)
    out = bytearray(length)
    out[-1] = m % params.s
    lead = m // params.s
    for pos in range(length - 2, -1, -1):
        out[pos] = params.s + lead % params.c
        lead //= params.c
    return bytes(out)


def _base_of(length: int, params: SCDCParams) -> int:
    base = 0
    size = params.s
    for _ in range(length - 1):
        base += size
        size *= params.c
    return base


def decode_codeword(codeword: bytes, params: SCDCParams) -> int:
    """Rank of a complete codeword (inverse of encode_rank)."""
    length = len(codeword)
    lead = 0
    for byte in codeword[:-1]:
        lead = lead * params.c + (byte - params.s)
    return _base_of(length, params) + lead * params.s + codeword[-1]


def decode_bytes(data: bytes, params: SCDCParams, start: int = 0) -> tuple[int, int]:
    """Consume one codeword at ``start``; return (rank, position past the stopper)."""
    pos = start
    end = len(data)
    while pos < end:
        if data[pos] < params.s:
            cw = data[start : pos + 1]
            if len(cw) > MAX_CODEWORD_LEN:
                raise CorruptStreamError(
                    f"codeword at offset {start} exceeds {MAX_CODEWORD_LEN} bytes"
                )
            return decode_codeword(cw, params), pos + 1
        pos += 1
    raise CorruptStreamError(f"stream ends inside a codeword starting at offset {start}")


def optimize_sc(freqs: list[int]) -> SCDCParams:
    """Pick the s in [1, 255] minimizing total encoded bytes for rank-ordered ``freqs``.

    Ties break toward smaller s.  Splits that cannot encode all ranks within
    MAX_CODEWORD_LEN bytes are excluded; if none can, the vocabulary is too
    large for the code.
    """
    if not freqs:
        raise ValueError("freqs must be non-empty")
    nranks = len(freqs)
    # Prefix sums let each candidate be costed per length block, not per rank.
    prefix = [0] * (nranks + 1)
    for i, f in enumerate(freqs):
        prefix[i + 1] = prefix[i] + f

    best_s = 0
    best_cost: int | None = None
    for s in range(1, 256):
        params = SCDCParams(s, 256 - s)
        cost = 0
        covered = 0
        for base, size, length in _block_bounds(params):
            if base >= nranks:
                break
            hi = min(base + size, nranks)
            cost += length * (prefix[hi] - prefix[base])
            covered = hi
        if covered < nranks:
            continue  # cannot encode every rank within the length cap
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_s = s
    if best_cost is None:
        raise CapacityError(
            f"no (s, c) split encodes {nranks} ranks within {MAX_CODEWORD_LEN} bytes"
        )
    return SCDCParams(best_s, 256 - best_s)
