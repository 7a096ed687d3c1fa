"""LZSS sliding-window dictionary coder.

Byte-oriented and type-agnostic: window 4096 bytes, lookahead 18 bytes,
minimum match 3. Tokens are grouped 8 per flag byte, flag bits consumed
MSB-first, bit 1 = literal byte, bit 0 = match. A match is two bytes
holding a 12-bit distance-1 and a 4-bit length-3:

    byte0 = (distance-1) >> 4
    byte1 = ((distance-1) & 0xF) << 4 | (length-3)

A match never replaces a sequence shorter than itself, so worst-case
output is m*9/8 + 1 bytes for m incompressible input bytes.
"""

from __future__ import annotations

from ..errors import FormatError, TruncatedStreamError

WINDOW = 4096
MIN_MATCH = 3
MAX_MATCH = 18
MAX_CHAIN = 64  # candidate positions examined per match search


def compress(data: bytes) -> bytes:
    n = len(data)
    out = bytearray()
    group = bytearray(1)  # flags byte placeholder
    flags = 0
    ntok = 0
    head: dict[int, int] = {}
    prev = [-1] * n
    i = 0
    while i < n:
        best_len = 0
        best_dist = 0
        if i + MIN_MATCH <= n:
            limit = min(MAX_MATCH, n - i)
            h = data[i] | (data[i + 1] << 8) | (data[i + 2] << 16)
            cand = head.get(h, -1)
            tries = MAX_CHAIN
            while cand >= 0 and i - cand <= WINDOW and tries > 0:
                if best_len == limit:
                    break
                # Cheap reject: a longer match must extend past best_len.
                if data[cand + best_len] == data[i + best_len]:
                    ln = 0
                    while ln < limit and data[cand + ln] == data[i + ln]:
                        ln += 1
                    if ln > best_len:
                        best_len = ln
                        best_dist = i - cand
                cand = prev[cand]
                tries -= 1
        if best_len >= MIN_MATCH:
            d = best_dist - 1
            group.append(d >> 4)
            group.append(((d & 0xF) << 4) | (best_len - 3))
            end = i + best_len
            stop = min(end, n - 2)
            while i < stop:
                h = data[i] | (data[i + 1] << 8) | (data[i + 2] << 16)
                prev[i] = head.get(h, -1)
                head[h] = i
                i += 1
            i = end
        else:
            flags |= 0x80 >> ntok
            group.append(data[i])
            if i + MIN_MATCH <= n:
                h = data[i] | (data[i + 1] << 8) | (data[i + 2] << 16)
                prev[i] = head.get(h, -1)
                head[h] = i
            i += 1
        ntok += 1
        if ntok == 8:
            group[0] = flags
            out.extend(group)
            group = bytearray(1)
            flags = 0
            ntok = 0
    if ntok:
        group[0] = flags
        out.extend(group)
    return bytes(out)


def decompress(data: bytes, expected_size: int | None = None) -> bytes:
    out = bytearray()
    pos = 0
    n = len(data)
    while pos < n:
        if expected_size is not None and len(out) >= expected_size:
            break
        flags = data[pos]
        pos += 1
        for t in range(8):
            if pos >= n:
                break
            if expected_size is not None and len(out) >= expected_size:
                break
            if flags & (0x80 >> t):
                out.append(data[pos])
                pos += 1
            else:
                if pos + 2 > n:
                    raise TruncatedStreamError("truncated stream")
                b0 = data[pos]
                b1 = data[pos + 1]
                pos += 2
                dist = ((b0 << 4) | (b1 >> 4)) + 1
                length = (b1 & 0xF) + 3
                if dist > len(out):
                    raise FormatError("invalid back-reference")
                start = len(out) - dist
                if dist >= length:
                    out.extend(out[start : start + length])
                else:
                    for j in range(length):
                        out.append(out[start + j])
    if expected_size is not None and len(out) != expected_size:
        raise TruncatedStreamError("truncated stream")
    return bytes(out)
