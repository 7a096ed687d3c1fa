"""Order-0 range coder (byte-oriented carry-less arithmetic coding).

The model is a static frequency table quantized to a total mass of 2^14,
written as a header so the decoder can rebuild the exact same cumulative
intervals. Header layout: symbol count as u16, then per symbol (value as
i32, frequency as u16), sorted by symbol value, little-endian.

Coding state is the classic 32-bit low/range pair. Renormalization emits
the top byte once it is settled; when the range underflows the bottom
threshold the range is clipped to the next boundary instead of carrying,
which costs a fraction of a bit on rare occasions but keeps the stream
strictly byte-oriented.
"""

from __future__ import annotations

import struct
from bisect import bisect_right

import numpy as np

from ..core import as_samples
from ..errors import FormatError, TruncatedStreamError

TOTAL_BITS = 14
TOTAL = 1 << TOTAL_BITS
TOP = 1 << 24
BOT = 1 << 16
MASK = (1 << 32) - 1


def quantize_counts(counts: np.ndarray, n: int) -> np.ndarray:
    """Scale positive counts to integers >= 1 summing exactly to TOTAL."""
    m = counts.size
    if m > TOTAL:
        raise ValueError("alphabet too large for the quantized model")
    q = np.maximum(1, (counts * TOTAL) // n)
    diff = TOTAL - int(q.sum())
    if diff > 0:
        # Largest-remainder apportionment, ties by symbol order.
        rem = counts * TOTAL - q * n
        order = np.lexsort((np.arange(m), -rem))
        q[order[:diff]] += 1
    while diff < 0:
        order = np.argsort(-q, kind="stable")
        for i in order.tolist():
            if diff == 0:
                break
            if q[i] >= 2:
                q[i] -= 1
                diff += 1
    return q


def _model_from_counts(symbols: np.ndarray, freqs: np.ndarray):
    cum = np.concatenate(([0], np.cumsum(freqs)))
    return symbols.tolist(), freqs.tolist(), cum.tolist()


def encode(values) -> tuple[bytes, bytes]:
    """Returns (header, payload)."""
    x = as_samples(values)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    symbols, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    freqs_q = quantize_counts(counts, x.size)
    header = bytearray(struct.pack("<H", symbols.size))
    for s, f in zip(symbols.tolist(), freqs_q.tolist()):
        header += struct.pack("<iH", s, f)
    _, freq_list, cum = _model_from_counts(symbols, freqs_q)
    out = bytearray()
    low = 0
    rng = MASK
    for idx in inverse.tolist():
        r = rng // TOTAL
        low += r * cum[idx]
        rng = r * freq_list[idx]
        while True:
            if (low ^ (low + rng)) < TOP:
                pass
            elif rng < BOT:
                rng = -low & (BOT - 1)
            else:
                break
            out.append((low >> 24) & 0xFF)
            low = (low << 8) & MASK
            rng <<= 8
    for _ in range(4):
        out.append((low >> 24) & 0xFF)
        low = (low << 8) & MASK
    return bytes(header), bytes(out)


def parse_header(header: bytes) -> tuple[np.ndarray, np.ndarray]:
    if len(header) < 2:
        raise FormatError("truncated frequency table")
    (m,) = struct.unpack_from("<H", header, 0)
    if m == 0:
        raise FormatError("corrupt model")
    if len(header) < 2 + 6 * m:
        raise FormatError("truncated frequency table")
    symbols = np.empty(m, dtype=np.int64)
    freqs = np.empty(m, dtype=np.int64)
    for i in range(m):
        s, f = struct.unpack_from("<iH", header, 2 + 6 * i)
        symbols[i] = s
        freqs[i] = f
    if int(freqs.sum()) != TOTAL or int(freqs.min()) < 1:
        raise FormatError("corrupt model")
    return symbols, freqs


def header_size(cardinality: int) -> int:
    return 2 + 6 * cardinality


def decode(header: bytes, payload: bytes, count: int) -> np.ndarray:
    symbols, freqs = parse_header(header)
    sym_list, freq_list, cum = _model_from_counts(symbols, freqs)
    pos = 0
    nbytes = len(payload)

    def next_byte():
        nonlocal pos
        if pos >= nbytes:
            raise TruncatedStreamError("truncated stream")
        b = payload[pos]
        pos += 1
        return b

    code = 0
    for _ in range(4):
        code = (code << 8) | next_byte()
    low = 0
    rng = MASK
    out = np.empty(count, dtype=np.int64)
    for i in range(count):
        r = rng // TOTAL
        dv = (code - low) // r
        if dv < 0 or dv >= TOTAL:
            raise FormatError("corrupt stream")
        idx = bisect_right(cum, dv) - 1
        out[i] = sym_list[idx]
        low += r * cum[idx]
        rng = r * freq_list[idx]
        while True:
            if (low ^ (low + rng)) < TOP:
                pass
            elif rng < BOT:
                rng = -low & (BOT - 1)
            else:
                break
            code = ((code << 8) | next_byte()) & MASK
            low = (low << 8) & MASK
            rng <<= 8
    return out
