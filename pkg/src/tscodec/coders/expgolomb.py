"""Exponential-Golomb universal code for non-negative integers.

A value n is written as L-1 zeros followed by the L-bit binary
representation of n+1, where L = floor(log2(n+1)) + 1. The codeword for n
therefore spends 2*floor(log2(n+1)) + 1 bits; signed inputs go through
zigzag before reaching this coder.
"""

from __future__ import annotations

import numpy as np

from ..core import as_samples
from .bitio import BitReader, BitStream, bit_length_u64, pack_codes


def code_length(value: int) -> int:
    """Bits spent on one codeword: 2*floor(log2(n+1)) + 1."""
    if value < 0:
        raise ValueError("Exp-Golomb requires non-negative values")
    return 2 * ((value + 1).bit_length() - 1) + 1


def code_lengths(values) -> np.ndarray:
    v = as_samples(values)
    if v.size and int(v.min()) < 0:
        raise ValueError("Exp-Golomb requires non-negative values")
    return 2 * (bit_length_u64(v + 1) - 1) + 1


def encode(values) -> BitStream:
    v = as_samples(values)
    if v.size == 0:
        return BitStream(b"", 0)
    if int(v.min()) < 0:
        raise ValueError("Exp-Golomb requires non-negative values")
    # The codeword of n is just n+1 in 2*bitlen(n+1)-1 bits: the leading
    # zeros of the wider field form the unary prefix.
    codes = (v + 1).astype(np.uint64)
    lengths = 2 * bit_length_u64(codes) - 1
    return pack_codes(codes, lengths)


def decode(stream: BitStream | bytes, count: int) -> np.ndarray:
    if isinstance(stream, BitStream):
        reader = BitReader(stream.data, stream.bit_length)
    else:
        reader = BitReader(stream)
    out = np.empty(count, dtype=np.int64)
    for i in range(count):
        zeros = reader.count_zeros()
        out[i] = reader.read(zeros + 1) - 1
    return out
