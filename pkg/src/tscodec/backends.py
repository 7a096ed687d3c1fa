"""Adapters over external general-purpose and time-series compressors.

Every backend is optional: the adapter imports its library lazily and
raises :class:`BackendUnavailableError` when it is missing, so callers can
mark the cell "n/a" instead of silently skipping it. Payloads use each
format's standard framing, so outputs remain checkable with stock tooling.

Default levels: deflate 9, zstd 19, brotli 10, bzip2 9, lzma 6, blosc 9,
pcodec 12. All one-shot calls create a fresh (de)compressor, so concurrent
use on distinct buffers is safe; backends with multithreaded modes are
pinned to one worker thread to keep speed comparisons fair.
"""

from __future__ import annotations

import bz2 as _bz2
import lzma as _lzma
import zlib as _zlib
from dataclasses import dataclass, field

import numpy as np

from .core import INT16_MAX, INT16_MIN, INT32_MAX, INT32_MIN, as_samples
from .errors import BackendUnavailableError, TscodecError, UnknownBackendError

BACKEND_IDS = (
    "deflate",
    "zstd",
    "brotli",
    "bzip2",
    "lzma",
    "lz4",
    "snappy",
    "blosc",
    "sprintz",
    "pcodec",
)

DEFAULT_LEVELS = {
    "deflate": 9,
    "zstd": 19,
    "brotli": 10,
    "bzip2": 9,
    "lzma": 6,
    "blosc": 9,
    "pcodec": 12,
}


@dataclass(frozen=True)
class BackendDescriptor:
    """One backend selection: id, optional level, extra string options."""

    backend_id: str
    level: int | None = None
    options: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        if self.backend_id not in BACKEND_IDS:
            raise UnknownBackendError(f"unregistered backend {self.backend_id!r}")

    @property
    def effective_level(self) -> int | None:
        if self.level is not None:
            return self.level
        return DEFAULT_LEVELS.get(self.backend_id)

    def option(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.options:
            if k == key:
                return v
        return default


def _require(module_names):
    import importlib

    last = None
    for name in module_names:
        try:
            return importlib.import_module(name)
        except ImportError as exc:  # pragma: no cover - environment dependent
            last = exc
    raise BackendUnavailableError(
        f"none of {module_names} is installed"
    ) from last


def _compress_deflate(data, desc):
    return _zlib.compress(data, desc.effective_level)


def _decompress_deflate(data, desc):
    return _zlib.decompress(data)


def _compress_bzip2(data, desc):
    return _bz2.compress(data, desc.effective_level)


def _decompress_bzip2(data, desc):
    return _bz2.decompress(data)


def _compress_lzma(data, desc):
    return _lzma.compress(data, preset=desc.effective_level)


def _decompress_lzma(data, desc):
    return _lzma.decompress(data)


def _compress_zstd(data, desc):
    zstd = _require(["zstandard"])
    return zstd.ZstdCompressor(level=desc.effective_level).compress(data)


def _decompress_zstd(data, desc):
    zstd = _require(["zstandard"])
    return zstd.ZstdDecompressor().decompress(data)


def _compress_brotli(data, desc):
    brotli = _require(["brotli"])
    return brotli.compress(data, quality=desc.effective_level)


def _decompress_brotli(data, desc):
    brotli = _require(["brotli"])
    return brotli.decompress(data)


def _compress_lz4(data, desc):
    frame = _require(["lz4.frame"])
    return frame.compress(data)


def _decompress_lz4(data, desc):
    frame = _require(["lz4.frame"])
    return frame.decompress(data)


def _compress_snappy(data, desc):
    snappy = _require(["snappy"])
    return snappy.compress(data)


def _decompress_snappy(data, desc):
    snappy = _require(["snappy"])
    return snappy.decompress(data)


def _compress_blosc(data, desc):
    # BloscLZ dictionary coder with byte-shuffle on; typesize tells the
    # shuffle the serialized sample width (default 2 bytes).
    typesize = int(desc.option("typesize", "2"))
    try:
        blosc2 = _require(["blosc2"])
        return blosc2.compress2(
            data,
            codec=blosc2.Codec.BLOSCLZ,
            clevel=desc.effective_level,
            filters=[blosc2.Filter.SHUFFLE],
            typesize=typesize,
            nthreads=1,
        )
    except BackendUnavailableError:
        blosc = _require(["blosc"])
        blosc.set_nthreads(1)
        return blosc.compress(
            data,
            typesize=typesize,
            clevel=desc.effective_level,
            shuffle=blosc.SHUFFLE,
            cname="blosclz",
        )


def _decompress_blosc(data, desc):
    try:
        blosc2 = _require(["blosc2"])
        return blosc2.decompress2(data)
    except BackendUnavailableError:
        blosc = _require(["blosc"])
        return blosc.decompress(data)


def _compress_sprintz(data, desc):
    sprintz = _require(["sprintz"])
    arr = np.frombuffer(data, dtype="<i2")
    return sprintz.compress(arr)


def _decompress_sprintz(data, desc):
    sprintz = _require(["sprintz"])
    return np.asarray(sprintz.decompress(data), dtype="<i2").tobytes()


def _compress_pcodec(data, desc):
    pcodec = _require(["pcodec"])
    dtype = desc.option("dtype", "<i2")
    arr = np.frombuffer(data, dtype=dtype)
    return bytes(
        pcodec.standalone.simple_compress(
            arr, pcodec.ChunkConfig(compression_level=desc.effective_level)
        )
    )


def _decompress_pcodec(data, desc):
    pcodec = _require(["pcodec"])
    dtype = desc.option("dtype", "<i2")
    return pcodec.standalone.simple_decompress(data).astype(dtype).tobytes()


_ADAPTERS = {
    "deflate": (_compress_deflate, _decompress_deflate),
    "zstd": (_compress_zstd, _decompress_zstd),
    "brotli": (_compress_brotli, _decompress_brotli),
    "bzip2": (_compress_bzip2, _decompress_bzip2),
    "lzma": (_compress_lzma, _decompress_lzma),
    "lz4": (_compress_lz4, _decompress_lz4),
    "snappy": (_compress_snappy, _decompress_snappy),
    "blosc": (_compress_blosc, _decompress_blosc),
    "sprintz": (_compress_sprintz, _decompress_sprintz),
    "pcodec": (_compress_pcodec, _decompress_pcodec),
}

_IMPORT_PROBES = {
    "deflate": ["zlib"],
    "zstd": ["zstandard"],
    "brotli": ["brotli"],
    "bzip2": ["bz2"],
    "lzma": ["lzma"],
    "lz4": ["lz4.frame"],
    "snappy": ["snappy"],
    "blosc": ["blosc2", "blosc"],
    "sprintz": ["sprintz"],
    "pcodec": ["pcodec"],
}


def is_available(backend_id: str) -> bool:
    if backend_id not in BACKEND_IDS:
        raise UnknownBackendError(f"unregistered backend {backend_id!r}")
    try:
        _require(_IMPORT_PROBES[backend_id])
        return True
    except BackendUnavailableError:
        return False


def availability_report() -> dict[str, bool]:
    """Availability of every registered backend, never silently skipped."""
    return {b: is_available(b) for b in BACKEND_IDS}


def backend_compress(data: bytes, descriptor: BackendDescriptor) -> bytes:
    if len(data) == 0:
        raise ValueError("undefined on empty input")
    compress, _ = _ADAPTERS[descriptor.backend_id]
    try:
        return compress(data, descriptor)
    except (BackendUnavailableError, ValueError):
        raise
    except Exception as exc:
        raise TscodecError(f"backend {descriptor.backend_id!r} failed: {exc}") from exc


def backend_decompress(data: bytes, descriptor: BackendDescriptor) -> bytes:
    _, decompress = _ADAPTERS[descriptor.backend_id]
    try:
        return decompress(data, descriptor)
    except (BackendUnavailableError, ValueError):
        raise
    except Exception as exc:
        raise TscodecError(f"backend {descriptor.backend_id!r} failed: {exc}") from exc


def serialize_series(series, width: int | None = None) -> tuple[bytes, int]:
    """Fixed-width little-endian sample bytes.

    Width 2 covers raw 16-bit data; transform outputs exceeding 16 bits
    use width 4. When ``width`` is None the narrowest sufficient width is
    chosen. Returns (bytes, width).
    """
    x = as_samples(series)
    if width is None:
        if x.size and (int(x.min()) < INT16_MIN or int(x.max()) > INT16_MAX):
            width = 4
        else:
            width = 2
    if width == 2:
        lo, hi = INT16_MIN, INT16_MAX
        dtype = "<i2"
    elif width == 4:
        lo, hi = INT32_MIN, INT32_MAX
        dtype = "<i4"
    else:
        raise ValueError("width must be 2 or 4")
    if x.size and (int(x.min()) < lo or int(x.max()) > hi):
        raise ValueError(f"sample out of range for {8 * width}-bit serialization")
    return x.astype(dtype).tobytes(), width


def deserialize_series(data: bytes, width: int, count: int) -> np.ndarray:
    if width == 2:
        dtype = "<i2"
    elif width == 4:
        dtype = "<i4"
    else:
        raise ValueError("width must be 2 or 4")
    if len(data) != width * count:
        raise ValueError("byte length does not match count and width")
    return np.frombuffer(data, dtype=dtype).astype(np.int64)
