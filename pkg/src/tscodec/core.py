"""Series types and the size/entropy metrics used throughout the toolkit.

A series is one channel of integer samples. Source data is expected to fit
signed 16 bits; transform outputs may grow beyond that but must stay within
signed 32 bits, which is the alphabet every coder accepts. Multichannel data
is a list of :class:`TimeSeries`, one per channel, processed independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INT16_MIN = -(1 << 15)
INT16_MAX = (1 << 15) - 1
INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1

#: Bits per sample of the uncompressed reference, used for the Shannon-limit
#: score. 16 matches the quantized integer width of the source data.
DEFAULT_SAMPLE_BITS = 16


def as_samples(series) -> np.ndarray:
    """Return the sample array of a series-like object as 1-D int64."""
    if isinstance(series, TimeSeries):
        return series.samples
    arr = np.asarray(series, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("series must be one-dimensional")
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One channel of integer samples in chronological order."""

    samples: np.ndarray
    channel_id: int = 0

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("series must be one-dimensional")
        if arr.size and (int(arr.min()) < INT32_MIN or int(arr.max()) > INT32_MAX):
            raise ValueError("samples exceed the signed 32-bit range")
        if self.channel_id < 0:
            raise ValueError("channel_id must be non-negative")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.channel_id == other.channel_id and np.array_equal(
            self.samples, other.samples
        )


@dataclass(frozen=True)
class SeriesStats:
    """Spread and entropy summary of one series."""

    cardinality: int
    aad: float
    entropy_bits: float
    shannon_cs: float


@dataclass(frozen=True)
class SizeReport:
    """Original vs compressed size with the derived ratio and score."""

    original_bytes: int
    compressed_bytes: int
    cr: float
    cs: float


def cardinality(series) -> int:
    """Number of distinct sample values; 0 for an empty series."""
    x = as_samples(series)
    if x.size == 0:
        return 0
    return int(np.unique(x).size)


def aad(series) -> float:
    """Average absolute deviation from center 0: (1/n) * sum(|x_k|)."""
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    return float(np.abs(x).mean())


def entropy_bits(series) -> float:
    """Empirical entropy of the value distribution in bits per sample."""
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    _, counts = np.unique(x, return_counts=True)
    p = counts / x.size
    return float(-np.sum(p * np.log2(p)))


def entropy_and_limit(series, sample_bits: int = DEFAULT_SAMPLE_BITS) -> SeriesStats:
    """Cardinality, AAD, empirical entropy, and the Shannon-limit score.

    The score ``1 - H/sample_bits`` is the best compression score any
    order-0 method can reach on this value distribution, relative to a
    fixed-width encoding of ``sample_bits`` bits per sample.
    """
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    h = entropy_bits(x)
    return SeriesStats(
        cardinality=cardinality(x),
        aad=aad(x),
        entropy_bits=h,
        shannon_cs=1.0 - h / sample_bits,
    )


def size_metrics(original_bytes: int, compressed_bytes: int) -> SizeReport:
    """Compression ratio CR and score CS = 1 - 1/CR.

    CS may be negative when compression expanded the data; reporting layers
    may clamp it for display, the value itself is kept exact.
    """
    if original_bytes < 1 or compressed_bytes < 1:
        raise ValueError("sizes must be positive")
    cr = original_bytes / compressed_bytes
    return SizeReport(
        original_bytes=int(original_bytes),
        compressed_bytes=int(compressed_bytes),
        cr=cr,
        cs=1.0 - 1.0 / cr,
    )


def compression_speed_mb_s(original_bytes: int, seconds: float) -> float:
    """Throughput in megabytes (1e6 bytes) of source data per second."""
    if seconds <= 0:
        return math.inf
    return original_bytes / 1e6 / seconds
