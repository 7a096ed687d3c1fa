"""Self-describing compressed container.

Layout (all multi-byte integers little-endian):

    magic            4 bytes  "TSC1"
    version          u8       currently 1
    transform count  u8
    transform ids    u8 each  1 = delta, 2 = rle0, 3 = quars
    coder id         u8       registry id byte
    channel count    u16
    per channel:
        token count    u64    symbols (or serialized items) in the payload
        width          u8     0 for symbol coders, else bytes per item
        side length    u32    transform side headers (QuaRs map)
        side bytes
        payload length u64
        payload bytes          coder header followed by coder payload

Token count is the length of the post-transform stream the coder decoded;
inverting the transform chain recovers the original sample count, so a
container decodes with no external information. Unknown versions, ids, or
magic are rejected outright, never partially parsed.

Accepted chains follow the fixed delta -> rle0 -> quars order (any prefix
or subset of it): zero-run coding presupposes the zero runs delta creates,
and the reshuffle map is fitted on the final token stream.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass

import numpy as np

from .backends import BackendDescriptor, backend_compress, backend_decompress, deserialize_series, serialize_series
from .coders.registry import CODER_BY_ID, CoderInfo, get_coder, split_header
from .core import TimeSeries, as_samples
from .errors import FormatError
from .transforms import TRANSFORM_ORDER, QuarsMap, TransformChain, chain_apply, chain_invert

MAGIC = b"TSC1"
VERSION = 1

TRANSFORM_ID = {"delta": 1, "rle0": 2, "quars": 3}
TRANSFORM_NAME = {v: k for k, v in TRANSFORM_ID.items()}


def validate_chain_order(stages: tuple[str, ...]) -> None:
    """Reject stage lists that are not a subsequence of delta, rle0, quars."""
    it = iter(TRANSFORM_ORDER)
    for stage in stages:
        for candidate in it:
            if candidate == stage:
                break
        else:
            raise ValueError(
                "invalid chain order: stages must follow delta, rle0, quars"
            )


@dataclass(frozen=True)
class ChannelBlock:
    """One encoded channel plus size accounting for reports."""

    token_count: int
    width: int
    side_bytes: bytes
    blob: bytes
    header_bytes: int  # coder header portion of the blob
    payload_bytes: int  # coder payload portion of the blob


def encode_channel(
    series,
    chain: TransformChain,
    coder: CoderInfo,
    level: int | None = None,
    timings: dict | None = None,
) -> ChannelBlock:
    """Transform and code one channel.

    ``timings`` (optional) receives "transform_s" and "code_s" keyed wall
    times; serialization between the stages is excluded from both.
    """
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    t0 = time.perf_counter()
    tokens, qmap = chain_apply(x, chain)
    t1 = time.perf_counter()
    side = qmap.to_bytes() if qmap is not None else b""

    if coder.kind == "symbol":
        t2 = time.perf_counter()
        header, payload = coder.encode(tokens)
        t3 = time.perf_counter()
        width = 0
    else:
        data, width = serialize_series(tokens)
        t2 = time.perf_counter()
        if coder.kind == "bytes":
            header, payload = coder.encode(data)
        else:
            desc = BackendDescriptor(coder.backend_id, level=level)
            header, payload = b"", backend_compress(data, desc)
        t3 = time.perf_counter()
    if timings is not None:
        timings["transform_s"] = timings.get("transform_s", 0.0) + (t1 - t0)
        timings["code_s"] = timings.get("code_s", 0.0) + (t3 - t2)
    return ChannelBlock(
        token_count=int(tokens.size),
        width=width,
        side_bytes=side,
        blob=header + payload,
        header_bytes=len(header),
        payload_bytes=len(payload),
    )


def decode_channel(
    block_tokens: int,
    width: int,
    side: bytes,
    blob: bytes,
    chain: TransformChain,
    coder: CoderInfo,
    timings: dict | None = None,
) -> np.ndarray:
    header, payload = split_header(coder, blob)
    t0 = time.perf_counter()
    if coder.kind == "symbol":
        tokens = coder.decode(header, payload, block_tokens)
    else:
        nbytes = block_tokens * width
        if coder.kind == "bytes":
            data = coder.decode(header, payload, nbytes)
        else:
            data = backend_decompress(payload, BackendDescriptor(coder.backend_id))
        if len(data) != nbytes:
            raise FormatError("payload decoded to unexpected size")
        tokens = None
    t1 = time.perf_counter()
    if tokens is None:
        tokens = deserialize_series(data, width, block_tokens)
    qmap = QuarsMap.from_bytes(side) if "quars" in chain.stages else None
    t2 = time.perf_counter()
    out = chain_invert(tokens, chain, qmap)
    t3 = time.perf_counter()
    if timings is not None:
        timings["code_s"] = timings.get("code_s", 0.0) + (t1 - t0)
        timings["transform_s"] = timings.get("transform_s", 0.0) + (t3 - t2)
    return out


def container_overhead(chain: TransformChain, channel_count: int) -> int:
    """Framing bytes outside side headers and coder blobs."""
    return 4 + 1 + 1 + len(chain.stages) + 1 + 2 + channel_count * (8 + 1 + 4 + 8)


def build_container(
    channels: list,
    chain: TransformChain,
    coder_name: str,
    level: int | None = None,
    blocks: list[ChannelBlock] | None = None,
) -> bytes:
    """Compress channels into one container blob."""
    validate_chain_order(chain.stages)
    coder = get_coder(coder_name)
    if not channels:
        raise ValueError("no channels to compress")
    if blocks is None:
        blocks = [encode_channel(ch, chain, coder, level) for ch in channels]
    out = bytearray()
    out += MAGIC
    out.append(VERSION)
    out.append(len(chain.stages))
    for s in chain.stages:
        out.append(TRANSFORM_ID[s])
    out.append(coder.id_byte)
    out += struct.pack("<H", len(blocks))
    for blk in blocks:
        out += struct.pack("<QBI", blk.token_count, blk.width, len(blk.side_bytes))
        out += blk.side_bytes
        out += struct.pack("<Q", len(blk.blob))
        out += blk.blob
    return bytes(out)


@dataclass(frozen=True)
class DecodedContainer:
    chain: TransformChain
    coder_name: str
    channels: list


def read_container(blob: bytes) -> DecodedContainer:
    """Decode a container back to its channels.

    Raises :class:`FormatError` on bad magic, unknown version or ids, and
    surfaces coder errors (truncated payloads and the like) unchanged.
    """
    if len(blob) < 9 or blob[:4] != MAGIC:
        raise FormatError("unsupported container: bad magic")
    if blob[4] != VERSION:
        raise FormatError(f"unsupported container: version {blob[4]}")
    pos = 5
    tcount = blob[pos]
    pos += 1
    stages = []
    for _ in range(tcount):
        tid = blob[pos]
        pos += 1
        if tid not in TRANSFORM_NAME:
            raise FormatError(f"unsupported container: transform id {tid}")
        stages.append(TRANSFORM_NAME[tid])
    coder_id = blob[pos]
    pos += 1
    if coder_id not in CODER_BY_ID:
        raise FormatError(f"unsupported container: coder id {coder_id}")
    coder = CODER_BY_ID[coder_id]
    chain = TransformChain(tuple(stages))
    (nch,) = struct.unpack_from("<H", blob, pos)
    pos += 2
    channels = []
    for ch in range(nch):
        if pos + 13 > len(blob):
            raise FormatError("unsupported container: truncated channel table")
        token_count, width, side_len = struct.unpack_from("<QBI", blob, pos)
        pos += 13
        side = bytes(blob[pos : pos + side_len])
        if len(side) != side_len:
            raise FormatError("unsupported container: truncated side header")
        pos += side_len
        if pos + 8 > len(blob):
            raise FormatError("unsupported container: truncated channel table")
        (plen,) = struct.unpack_from("<Q", blob, pos)
        pos += 8
        payload = bytes(blob[pos : pos + plen])
        if len(payload) != plen:
            raise FormatError("truncated stream")
        pos += plen
        samples = decode_channel(token_count, width, side, payload, chain, coder)
        channels.append(TimeSeries(samples=samples, channel_id=ch))
    if pos != len(blob):
        raise FormatError("unsupported container: trailing bytes")
    return DecodedContainer(chain=chain, coder_name=coder.name, channels=channels)
