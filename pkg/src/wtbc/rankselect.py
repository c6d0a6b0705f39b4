"""Rank/select substrates: byte sequences, plain bitvectors, document boundaries.

All positions in the query API are 1-based; rank(x, i) counts occurrences in
positions 1..i and select(x, j) returns the position of the j-th occurrence.
Byte sequences keep absolute cumulative counters sampled every ``block``
positions for each byte value that occurs, so a query touches one counter
plus a bounded scan (done with C-speed bytes.count / bytes.index).
"""

from __future__ import annotations

import bisect

import numpy as np

from .errors import NotFoundError, OutOfRangeError

DEFAULT_BLOCK_SIZE = 1 << 14

# Bitvector counters sample cumulative popcounts every 512 bits (64 bytes).
_BITS_PER_BLOCK = 512
_BYTES_PER_BLOCK = _BITS_PER_BLOCK // 8


class ByteSequenceRS:
    """An immutable byte sequence with per-value rank and select."""

    __slots__ = ("data", "block", "_counters", "_totals")

    def __init__(self, data: bytes, block: int = DEFAULT_BLOCK_SIZE):
        if block < 1:
            raise ValueError(f"block size must be >= 1, got {block}")
        self.data = bytes(data)
        self.block = block
        self._counters: dict[int, np.ndarray] = {}
        arr = np.frombuffer(self.data, dtype=np.uint8)
        totals = np.bincount(arr, minlength=256) if len(arr) else np.zeros(256, np.int64)
        self._totals = {int(v): int(totals[v]) for v in np.nonzero(totals)[0]}
        nblocks = len(self.data) // block
        if nblocks:
            counts = np.empty((nblocks, 256), dtype=np.int64)
            head = arr[: nblocks * block].reshape(nblocks, block)
            for t in range(nblocks):
                counts[t] = np.bincount(head[t], minlength=256)
            cum = counts.cumsum(axis=0)
            for v in np.nonzero(cum[-1])[0]:
                self._counters[int(v)] = cum[:, v].astype(np.uint32)

    def __len__(self) -> int:
        return len(self.data)

    def byte_at(self, i: int) -> int:
        """Byte value at 1-based position i."""
        if not 1 <= i <= len(self.data):
            raise OutOfRangeError(f"position {i} not in [1, {len(self.data)}]")
        return self.data[i - 1]

    def count(self, value: int) -> int:
        """Total occurrences of ``value``."""
        return self._totals.get(value, 0)

    def rank(self, value: int, i: int) -> int:
        """Occurrences of ``value`` in positions 1..i (i = 0 gives 0)."""
        if not 0 <= i <= len(self.data):
            raise OutOfRangeError(f"position {i} not in [0, {len(self.data)}]")
        t = i // self.block
        col = self._counters.get(value)
        base = int(col[t - 1]) if (col is not None and t > 0) else 0
        return base + self.data.count(value, t * self.block, i)

    def select(self, value: int, j: int) -> int:
        """1-based position of the j-th occurrence of ``value``."""
        if j < 1:
            raise ValueError(f"occurrence ordinal must be >= 1, got {j}")
        if j > self._totals.get(value, 0):
            raise NotFoundError(
                f"byte {value} occurs {self._totals.get(value, 0)} times, asked for #{j}"
            )
        col = self._counters.get(value)
        start = 0
        remaining = j
        if col is not None:
            t = int(np.searchsorted(col, j, side="left"))
            if t == len(col):  # the j-th occurrence lies in the tail
                start = len(col) * self.block
                remaining = j - int(col[-1])
            else:
                start = t * self.block
                remaining = j - (int(col[t - 1]) if t > 0 else 0)
        pos = start - 1
        for _ in range(remaining):
            pos = self.data.index(value, pos + 1)
        return pos + 1

    @property
    def counter_bytes(self) -> int:
        """In-memory footprint of the sampled counters (4 bytes per sample)."""
        return sum(4 * len(col) for col in self._counters.values())


class BitVectorRS:
    """A packed bitvector with rank1/select1/next1 (1-based positions, LSB-first)."""

    __slots__ = ("buf", "nbits", "ones", "_cum")

    def __init__(self, buf: bytes, nbits: int):
        if len(buf) != (nbits + 7) // 8:
            raise ValueError(f"buffer of {len(buf)} bytes cannot hold {nbits} bits")
        normalized = bytearray(buf)
        if nbits & 7 and normalized:  # clear padding bits past nbits
            normalized[-1] &= (1 << (nbits & 7)) - 1
        self.buf = bytes(normalized)
        self.nbits = nbits
        nblocks = len(self.buf) // _BYTES_PER_BLOCK
        cum: list[int] = []
        total = 0
        for t in range(nblocks):
            chunk = self.buf[t * _BYTES_PER_BLOCK : (t + 1) * _BYTES_PER_BLOCK]
            total += int.from_bytes(chunk, "little").bit_count()
            cum.append(total)
        self._cum = cum
        tail = self.buf[nblocks * _BYTES_PER_BLOCK :]
        self.ones = total + int.from_bytes(tail, "little").bit_count()

    @classmethod
    def from_bits(cls, bits: str) -> "BitVectorRS":
        """Build from a '0'/'1' string, leftmost character = position 1."""
        builder = BitBuilder()
        for ch in bits:
            builder.append(ch == "1")
        return builder.build()

    def __len__(self) -> int:
        return self.nbits

    def get(self, i: int) -> int:
        if not 1 <= i <= self.nbits:
            raise OutOfRangeError(f"bit position {i} not in [1, {self.nbits}]")
        return (self.buf[(i - 1) >> 3] >> ((i - 1) & 7)) & 1

    def rank1(self, i: int) -> int:
        """Number of 1 bits in positions 1..i (i = 0 gives 0)."""
        if not 0 <= i <= self.nbits:
            raise OutOfRangeError(f"bit position {i} not in [0, {self.nbits}]")
        if i == 0:
            return 0
        t = (i - 1) // _BITS_PER_BLOCK  # block containing bit i
        base = self._cum[t - 1] if t > 0 else 0
        lo = t * _BYTES_PER_BLOCK
        full_bytes, rem = divmod(i - t * _BITS_PER_BLOCK, 8)
        count = int.from_bytes(self.buf[lo : lo + full_bytes], "little").bit_count()
        if rem:
            count += (self.buf[lo + full_bytes] & ((1 << rem) - 1)).bit_count()
        return base + count

    def select1(self, j: int) -> int:
        """1-based position of the j-th set bit."""
        if j < 1:
            raise ValueError(f"occurrence ordinal must be >= 1, got {j}")
        if j > self.ones:
            raise NotFoundError(f"bitvector has {self.ones} ones, asked for #{j}")
        t = bisect.bisect_left(self._cum, j)
        remaining = j - (self._cum[t - 1] if t > 0 else 0)
        byte_idx = t * _BYTES_PER_BLOCK
        while True:
            b = self.buf[byte_idx]
            pc = b.bit_count()
            if pc >= remaining:
                for bit in range(8):
                    if b & (1 << bit):
                        remaining -= 1
                        if remaining == 0:
                            return byte_idx * 8 + bit + 1
            remaining -= pc
            byte_idx += 1

    def next1(self, i: int) -> int:
        """Smallest position p > i with bit p set, or nbits + 1 if none."""
        if not 0 <= i <= self.nbits:
            raise OutOfRangeError(f"bit position {i} not in [0, {self.nbits}]")
        byte_idx = i >> 3
        if byte_idx < len(self.buf):
            b = self.buf[byte_idx] >> (i & 7)
            if b:
                return i + (b & -b).bit_length()
            byte_idx += 1
        while byte_idx < len(self.buf):
            b = self.buf[byte_idx]
            if b:
                p = byte_idx * 8 + (b & -b).bit_length()
                return p if p <= self.nbits else self.nbits + 1
            byte_idx += 1
        return self.nbits + 1


class BitBuilder:
    """Append-only bit writer producing a BitVectorRS."""

    __slots__ = ("buf", "nbits")

    def __init__(self) -> None:
        self.buf = bytearray()
        self.nbits = 0

    def append(self, bit: bool) -> None:
        if self.nbits % 8 == 0:
            self.buf.append(0)
        if bit:
            self.buf[-1] |= 1 << (self.nbits & 7)
        self.nbits += 1

    def build(self) -> BitVectorRS:
        return BitVectorRS(bytes(self.buf), self.nbits)


class DocBoundaries:
    """Sorted root positions of the document-end codewords: O(1) select, O(log N) rank."""

    __slots__ = ("ends",)

    def __init__(self, ends: list[int]):
        if any(nxt <= cur for cur, nxt in zip(ends, ends[1:])):
            raise ValueError("boundary positions must be strictly increasing")
        self.ends = list(ends)

    def __len__(self) -> int:
        return len(self.ends)

    def doc_rank(self, p: int) -> int:
        """Number of boundary positions <= p."""
        if p < 0:
            raise OutOfRangeError(f"position {p} is negative")
        return bisect.bisect_right(self.ends, p)

    def doc_select(self, d: int) -> int:
        """Boundary position of document d; doc_select(0) = 0."""
        if not 0 <= d <= len(self.ends):
            raise OutOfRangeError(f"document {d} not in [0, {len(self.ends)}]")
        return 0 if d == 0 else self.ends[d - 1]

    def is_boundary(self, p: int) -> bool:
        i = bisect.bisect_left(self.ends, p)
        return i < len(self.ends) and self.ends[i] == p
