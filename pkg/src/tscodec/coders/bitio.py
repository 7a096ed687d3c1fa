"""Bit stream primitives shared by the bit-oriented coders.

Bits are filled most-significant-first within each byte; unused trailing
bits of the final byte are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TruncatedStreamError


@dataclass(frozen=True)
class BitStream:
    """A byte buffer holding ``bit_length`` valid bits."""

    data: bytes
    bit_length: int

    def __post_init__(self):
        if self.bit_length < 0 or self.bit_length > 8 * len(self.data):
            raise ValueError("bit_length inconsistent with byte count")


def bit_length_u64(values: np.ndarray) -> np.ndarray:
    """Vectorized bit length of non-negative integers (0 -> 0)."""
    v = values.astype(np.uint64, copy=True)
    bl = np.zeros(v.shape, dtype=np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        big = v >= np.uint64(1 << s)
        bl[big] += s
        v[big] >>= np.uint64(s)
    bl[v > 0] += 1
    return bl


def pack_codes(codes: np.ndarray, lengths: np.ndarray, chunk: int = 1 << 16) -> BitStream:
    """Concatenate variable-length codewords into one bit stream.

    ``codes[i]`` holds the codeword value in its low ``lengths[i]`` bits;
    lengths must be in [1, 64].
    """
    codes = codes.astype(np.uint64, copy=False)
    lengths = lengths.astype(np.int64, copy=False)
    if codes.size == 0:
        return BitStream(b"", 0)
    if int(lengths.min()) < 1 or int(lengths.max()) > 64:
        raise ValueError("codeword lengths must be in [1, 64]")
    pieces = []
    cols = np.arange(64)
    for start in range(0, codes.size, chunk):
        c = codes[start : start + chunk]
        ln = lengths[start : start + chunk]
        # Shift each code so its first bit sits at bit 63, then the first
        # `len` unpacked bits of each row are exactly the codeword.
        shifted = c << (64 - ln).astype(np.uint64)
        bits = np.unpackbits(shifted.astype(">u8").view(np.uint8).reshape(-1, 8), axis=1)
        mask = cols < ln[:, None]
        pieces.append(bits[mask])
    flat = np.concatenate(pieces)
    return BitStream(np.packbits(flat).tobytes(), int(lengths.sum()))


class BitWriter:
    """Incremental MSB-first bit writer for scalar encode paths."""

    def __init__(self):
        self._out = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self._out.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> BitStream:
        total = 8 * len(self._out) + self._nbits
        if self._nbits:
            tail = (self._acc << (8 - self._nbits)) & 0xFF
            return BitStream(bytes(self._out) + bytes([tail]), total)
        return BitStream(bytes(self._out), total)


class BitReader:
    """MSB-first bit reader over a byte buffer."""

    __slots__ = ("_data", "_nbits", "_pos")

    def __init__(self, data: bytes, bit_length: int | None = None):
        self._data = data
        self._nbits = 8 * len(data) if bit_length is None else bit_length
        self._pos = 0

    @property
    def position(self) -> int:
        return self._pos

    @property
    def remaining(self) -> int:
        return self._nbits - self._pos

    def read(self, nbits: int) -> int:
        end = self._pos + nbits
        if end > self._nbits:
            raise TruncatedStreamError("truncated stream")
        if nbits == 0:
            return 0
        first = self._pos >> 3
        last = (end + 7) >> 3
        chunk = int.from_bytes(self._data[first:last], "big")
        val = (chunk >> ((last << 3) - end)) & ((1 << nbits) - 1)
        self._pos = end
        return val

    def count_zeros(self) -> int:
        """Count and consume 0 bits up to (not including) the next 1 bit."""
        zeros = 0
        while True:
            take = min(56, self._nbits - self._pos)
            if take == 0:
                raise TruncatedStreamError("truncated stream")
            first = self._pos >> 3
            last = (self._pos + take + 7) >> 3
            chunk = int.from_bytes(self._data[first:last], "big")
            window = (chunk >> ((last << 3) - (self._pos + take))) & ((1 << take) - 1)
            if window == 0:
                zeros += take
                self._pos += take
                continue
            lead = take - window.bit_length()
            zeros += lead
            self._pos += lead
            return zeros

    def count_ones(self) -> int:
        """Count and consume 1 bits up to (not including) the next 0 bit."""
        ones = 0
        while True:
            take = min(56, self._nbits - self._pos)
            if take == 0:
                raise TruncatedStreamError("truncated stream")
            first = self._pos >> 3
            last = (self._pos + take + 7) >> 3
            chunk = int.from_bytes(self._data[first:last], "big")
            window = (chunk >> ((last << 3) - (self._pos + take))) & ((1 << take) - 1)
            inverted = window ^ ((1 << take) - 1)
            if inverted == 0:
                ones += take
                self._pos += take
                continue
            lead = take - inverted.bit_length()
            ones += lead
            self._pos += lead
            return ones
