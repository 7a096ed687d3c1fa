"""Block bit packing for non-negative integers.

Each block of ``block_size`` values is stored as one width byte w (the bit
length of the block maximum, 0..32) followed by ceil(count*w/8) bytes of
w-bit values packed MSB-first. A final short block packs only its true
count; the caller supplies the total count on decode. Signed inputs go
through zigzag before reaching this coder.
"""

from __future__ import annotations

import numpy as np

from ..core import as_samples
from ..errors import FormatError, TruncatedStreamError
from .bitio import bit_length_u64

DEFAULT_BLOCK_SIZE = 128
MAX_WIDTH = 32


def encode(values, block_size: int = DEFAULT_BLOCK_SIZE) -> bytes:
    v = as_samples(values)
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    if v.size == 0:
        return b""
    if int(v.min()) < 0:
        raise ValueError("bit packing requires non-negative values")
    if int(v.max()) >> MAX_WIDTH:
        raise ValueError("value wider than 32 bits")
    n = v.size
    nblocks = (n + block_size - 1) // block_size
    pad = nblocks * block_size - n
    padded = np.concatenate([v, np.zeros(pad, dtype=v.dtype)]) if pad else v
    blocks = padded.reshape(nblocks, block_size)
    widths = bit_length_u64(blocks.max(axis=1))
    counts = np.full(nblocks, block_size, dtype=np.int64)
    counts[-1] = n - (nblocks - 1) * block_size
    payload_sizes = (counts * widths + 7) // 8
    offsets = np.zeros(nblocks + 1, dtype=np.int64)
    np.cumsum(1 + payload_sizes, out=offsets[1:])
    out = np.zeros(int(offsets[-1]), dtype=np.uint8)
    out[offsets[:-1]] = widths
    # Blocks sharing a width pack in one vectorized shot; packbits pads
    # each row to a byte boundary, matching the per-block payload layout.
    for w in np.unique(widths).tolist():
        if w == 0:
            continue
        idx = np.flatnonzero((widths == w) & (counts == block_size))
        if idx.size:
            bits = np.unpackbits(
                blocks[idx].astype(">u4").view(np.uint8).reshape(idx.size, -1), axis=1
            ).reshape(idx.size, block_size, 32)[:, :, 32 - w :]
            packed = np.packbits(bits.reshape(idx.size, -1), axis=1)
            pos = offsets[idx][:, None] + 1 + np.arange(packed.shape[1])[None, :]
            out[pos.ravel()] = packed.ravel()
    if int(widths[-1]) and counts[-1] != block_size:
        w = int(widths[-1])
        blk = v[(nblocks - 1) * block_size :]
        bits = np.unpackbits(blk.astype(">u4").view(np.uint8).reshape(-1, 4), axis=1)[:, 32 - w :]
        packed = np.packbits(bits)
        out[offsets[-2] + 1 : offsets[-1]] = packed
    return out.tobytes()


def decode(data: bytes, count: int, block_size: int = DEFAULT_BLOCK_SIZE) -> np.ndarray:
    out = np.empty(count, dtype=np.int64)
    pos = 0
    done = 0
    buf = np.frombuffer(data, dtype=np.uint8)
    while done < count:
        if pos >= len(data):
            raise TruncatedStreamError("truncated stream")
        w = data[pos]
        pos += 1
        take = min(block_size, count - done)
        if w > MAX_WIDTH:
            raise FormatError("corrupt block header")
        if w == 0:
            out[done : done + take] = 0
            done += take
            continue
        nbytes = (take * w + 7) // 8
        if pos + nbytes > len(data):
            raise TruncatedStreamError("truncated stream")
        bits = np.unpackbits(buf[pos : pos + nbytes])[: take * w].reshape(take, w)
        weights = (np.uint64(1) << np.arange(w - 1, -1, -1, dtype=np.uint64))
        out[done : done + take] = (bits.astype(np.uint64) * weights).sum(axis=1)
        pos += nbytes
        done += take
    return out
