"""Dynamic canonical Huffman coding.

Code lengths are derived from the symbol frequencies of the input, then
canonicalized so the header only needs (symbol, length) pairs. Header
layout: symbol count as u16, then per symbol (value as i32, code length as
u8), sorted by symbol value, little-endian. A single-symbol alphabet gets a
1-bit code; the cost of one bit per sample is real and is reported as such.

Headers grow linearly with cardinality (5 bytes per distinct symbol),
which is exactly the effect that makes dynamic codes unattractive on
high-cardinality data.
"""

from __future__ import annotations

import heapq
import struct

import numpy as np

from ..core import as_samples
from ..errors import FormatError, TruncatedStreamError
from .bitio import BitStream, pack_codes

MAX_CODE_LENGTH = 32


def code_lengths_from_counts(counts: np.ndarray) -> np.ndarray:
    """Optimal prefix code lengths for positive frequencies.

    Repeatedly merges the two least frequent subtrees; ties are broken by
    insertion order so the resulting lengths are deterministic across
    platforms.
    """
    m = counts.size
    if m == 0:
        raise ValueError("undefined on empty input")
    if m == 1:
        return np.array([1], dtype=np.int64)
    heap = [(int(c), i, i) for i, c in enumerate(counts)]
    heapq.heapify(heap)
    parent = [-1] * (2 * m - 1)
    next_id = m
    while len(heap) > 1:
        c1, _, n1 = heapq.heappop(heap)
        c2, _, n2 = heapq.heappop(heap)
        parent[n1] = next_id
        parent[n2] = next_id
        heapq.heappush(heap, (c1 + c2, next_id, next_id))
        next_id += 1
    lengths = np.zeros(m, dtype=np.int64)
    for i in range(m):
        d = 0
        node = i
        while parent[node] != -1:
            node = parent[node]
            d += 1
        lengths[i] = d
    if int(lengths.max()) > MAX_CODE_LENGTH:
        raise ValueError("code length limit exceeded")
    return lengths


def canonical_codes(symbols: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Assign canonical codewords: sorted by (length, symbol), counting up."""
    order = np.lexsort((symbols, lengths))
    codes = np.zeros(symbols.size, dtype=np.uint64)
    code = 0
    prev_len = int(lengths[order[0]])
    for idx in order.tolist():
        ln = int(lengths[idx])
        code <<= ln - prev_len
        codes[idx] = code
        code += 1
        prev_len = ln
    return codes


def _check_kraft(lengths: np.ndarray) -> None:
    kraft = np.sum(2.0 ** (-lengths.astype(np.float64)))
    if kraft > 1.0 + 1e-12:
        raise FormatError("invalid code table")


def encode(values) -> tuple[bytes, BitStream]:
    """Returns (header, payload). Payload spends in [H, H+1) bits/symbol."""
    x = as_samples(values)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    symbols, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    lengths = code_lengths_from_counts(counts)
    codes = canonical_codes(symbols, lengths)
    header = bytearray(struct.pack("<H", symbols.size))
    for s, ln in zip(symbols.tolist(), lengths.tolist()):
        header += struct.pack("<iB", s, ln)
    payload = pack_codes(codes[inverse], lengths[inverse])
    return bytes(header), payload


def parse_header(header: bytes) -> tuple[np.ndarray, np.ndarray]:
    if len(header) < 2:
        raise FormatError("truncated code table")
    (m,) = struct.unpack_from("<H", header, 0)
    if m == 0:
        raise FormatError("invalid code table")
    if len(header) < 2 + 5 * m:
        raise FormatError("truncated code table")
    symbols = np.empty(m, dtype=np.int64)
    lengths = np.empty(m, dtype=np.int64)
    for i in range(m):
        s, ln = struct.unpack_from("<iB", header, 2 + 5 * i)
        symbols[i] = s
        lengths[i] = ln
    if int(lengths.min()) < 1 or int(lengths.max()) > MAX_CODE_LENGTH:
        raise FormatError("invalid code table")
    _check_kraft(lengths)
    return symbols, lengths


def header_size(cardinality: int) -> int:
    return 2 + 5 * cardinality


def decode(header: bytes, payload: BitStream | bytes, count: int) -> np.ndarray:
    symbols, lengths = parse_header(header)
    order = np.lexsort((symbols, lengths))
    sorted_syms = symbols[order].tolist()
    sorted_lens = lengths[order].tolist()
    # Canonical decode tables: per length, the first code value and the
    # index of its first symbol in canonical order.
    first_code = {}
    first_index = {}
    count_at = {}
    code = 0
    prev_len = sorted_lens[0]
    for i, ln in enumerate(sorted_lens):
        code <<= ln - prev_len
        if ln not in first_code:
            first_code[ln] = code
            first_index[ln] = i
            count_at[ln] = 0
        count_at[ln] += 1
        code += 1
        prev_len = ln
    if isinstance(payload, BitStream):
        data, nbits = payload.data, payload.bit_length
    else:
        data, nbits = payload, 8 * len(payload)
    out = np.empty(count, dtype=np.int64)
    pos = 0
    for i in range(count):
        code = 0
        ln = 0
        while True:
            if pos >= nbits:
                raise TruncatedStreamError("truncated stream")
            code = (code << 1) | ((data[pos >> 3] >> (7 - (pos & 7))) & 1)
            pos += 1
            ln += 1
            base = first_code.get(ln)
            if base is not None and base <= code < base + count_at[ln]:
                out[i] = sorted_syms[first_index[ln] + code - base]
                break
            if ln > MAX_CODE_LENGTH:
                raise FormatError("invalid code table")
    return out
