"""Static magnitude-category code for signed integers.

Each value is coded as its category k (the bit length of |v|, with k = 0
for zero) followed by k magnitude/sign bits. The category uses a fixed
unary code, k ones then a zero, so the code needs no header and spends
fewer bits on smaller magnitudes:

    0  -> "0"
    +1 -> "10" + "1"
    -1 -> "10" + "0"

Magnitude bits follow the JPEG convention: the low k bits of v for
positive values, the low k bits of v-1 (two's complement) for negative
ones, so the top magnitude bit doubles as the sign.
"""

from __future__ import annotations

import numpy as np

from ..core import as_samples
from .bitio import BitReader, BitStream, bit_length_u64, pack_codes

MAX_MAGNITUDE_BITS = 31


def code_length(value: int) -> int:
    k = abs(value).bit_length()
    return 1 + 2 * k


def encode(values) -> BitStream:
    v = as_samples(values)
    if v.size == 0:
        return BitStream(b"", 0)
    mag = np.abs(v)
    if int(mag.max()) >= 1 << MAX_MAGNITUDE_BITS:
        raise ValueError("magnitude exceeds 31 bits")
    k = bit_length_u64(mag)
    m = np.where(v > 0, v, v + (np.int64(1) << k) - 1).astype(np.uint64)
    ones = (np.uint64(1) << k.astype(np.uint64)) - np.uint64(1)
    # Codeword bits: k ones, one zero, then k magnitude bits.
    codes = (ones << (k + 1).astype(np.uint64)) | m
    lengths = 2 * k + 1
    return pack_codes(codes, lengths)


def decode(stream: BitStream | bytes, count: int) -> np.ndarray:
    if isinstance(stream, BitStream):
        reader = BitReader(stream.data, stream.bit_length)
    else:
        reader = BitReader(stream)
    out = np.empty(count, dtype=np.int64)
    for i in range(count):
        k = reader.count_ones()
        reader.read(1)  # category terminator
        if k == 0:
            out[i] = 0
            continue
        m = reader.read(k)
        out[i] = m if m >> (k - 1) else m - (1 << k) + 1
    return out
