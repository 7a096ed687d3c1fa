"""Invertible compression-aiding transforms.

Three stages can be chained ahead of any coder, in this fixed order:

* ``delta``  - consecutive differences, first sample kept verbatim
* ``rle0``   - run-length coding of zero runs only, emitting (0, length) pairs
* ``quars``  - quantile reshuffling: a bijective remap that sends frequent
  quantile bins to small magnitudes, producing a zero-centered unimodal
  value distribution

``zigzag``/``unzigzag`` map signed integers onto non-negative ones so that
small magnitudes stay small; coders whose natural alphabet is non-negative
apply it internally.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .core import INT32_MAX, INT32_MIN, as_samples
from .errors import FormatError

TRANSFORM_ORDER = ("delta", "rle0", "quars")

DEFAULT_QUARS_BINS = 256


def delta_encode(series) -> np.ndarray:
    """(x1, x2, ..., xn) -> (x1, x2-x1, ..., xn-x(n-1))."""
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    out = np.empty_like(x)
    out[0] = x[0]
    np.subtract(x[1:], x[:-1], out=out[1:])
    return out


def delta_decode(deltas) -> np.ndarray:
    """Prefix sums; exact inverse of :func:`delta_encode`."""
    d = as_samples(deltas)
    if d.size == 0:
        raise ValueError("undefined on empty input")
    out = np.cumsum(d)
    if int(out.min()) < INT32_MIN or int(out.max()) > INT32_MAX:
        raise FormatError("corrupt delta stream: accumulated value out of range")
    return out


def rle0_encode(series) -> np.ndarray:
    """Replace each maximal run of k zeros with the token pair (0, k).

    Nonzero values pass through unchanged. 0 is safe as the run marker
    because a zero datum always opens a run of length >= 1.
    """
    x = as_samples(series)
    if x.size == 0:
        return x.copy()
    zero = x == 0
    # Run starts: a zero not preceded by a zero.
    starts = np.flatnonzero(zero & np.r_[True, ~zero[:-1]])
    if starts.size == 0:
        return x.copy()
    ends = np.flatnonzero(zero & np.r_[~zero[1:], True])
    lengths = ends - starts + 1
    nonzero_idx = np.flatnonzero(~zero)
    zeros_before = np.cumsum(zero) - zero  # zeros strictly before each index
    runs_before_nz = np.searchsorted(starts, nonzero_idx, side="right")
    out = np.empty(nonzero_idx.size + 2 * starts.size, dtype=x.dtype)
    out_nz = nonzero_idx - zeros_before[nonzero_idx] + 2 * runs_before_nz
    out[out_nz] = x[nonzero_idx]
    out_run = starts - zeros_before[starts] + 2 * np.arange(starts.size)
    out[out_run] = 0
    out[out_run + 1] = lengths
    return out


def rle0_decode(tokens) -> np.ndarray:
    """Exact inverse of :func:`rle0_encode`."""
    t = as_samples(tokens)
    if t.size == 0:
        return t.copy()
    zero_pos = np.flatnonzero(t == 0)
    # A zero at position p is a run marker and p+1 is its length slot; a
    # zero in a length slot would mean a run of length 0. The list of zero
    # positions is short (one per run), so a Python walk is fine.
    markers = []
    length_slot = -1
    for p in zero_pos.tolist():
        if p == length_slot:
            raise FormatError("malformed run token: run length of 0")
        markers.append(p)
        length_slot = p + 1
    markers = np.asarray(markers, dtype=np.int64)
    if markers.size and markers[-1] == t.size - 1:
        raise FormatError("malformed run token: trailing 0 without run length")
    lengths = t[markers + 1] if markers.size else np.empty(0, dtype=t.dtype)
    if np.any(lengths <= 0):
        raise FormatError("malformed run token: non-positive run length")
    counts = np.ones(t.size, dtype=np.int64)
    if markers.size:
        counts[markers] = lengths
        counts[markers + 1] = 0  # length slots emit nothing
    return np.repeat(t * (counts > 0), counts)


def zigzag(series) -> np.ndarray:
    """v >= 0 -> 2v; v < 0 -> -2v-1. Bijective, small |v| stays small."""
    v = as_samples(series)
    return np.where(v >= 0, 2 * v, -2 * v - 1)


def unzigzag(series) -> np.ndarray:
    """Inverse of :func:`zigzag`."""
    u = as_samples(series)
    if u.size and int(u.min()) < 0:
        raise FormatError("zigzag stream contains negative values")
    return np.where(u & 1 == 0, u >> 1, -((u + 1) >> 1))


@dataclass(frozen=True)
class QuarsMap:
    """Bijective value remap fitted by :func:`quars_encode`.

    Bins partition the observed value range into contiguous integer
    intervals. Bin i covers [lower_bounds[i], next lower bound), the last
    bin ends at ``upper_exclusive``. Each bin is shifted as a block to its
    target range, so order and spacing inside a bin are preserved.
    """

    lower_bounds: np.ndarray  # sorted ascending, int64
    target_offsets: np.ndarray  # aligned with lower_bounds
    upper_exclusive: int

    @property
    def bin_count(self) -> int:
        return int(self.lower_bounds.size)

    def widths(self) -> np.ndarray:
        return np.r_[self.lower_bounds[1:], self.upper_exclusive] - self.lower_bounds

    def apply(self, values) -> np.ndarray:
        x = as_samples(values)
        if x.size == 0:
            return x.copy()
        if int(x.min()) < self.lower_bounds[0] or int(x.max()) >= self.upper_exclusive:
            raise ValueError("value outside the fitted range")
        idx = np.searchsorted(self.lower_bounds, x, side="right") - 1
        return x - self.lower_bounds[idx] + self.target_offsets[idx]

    def invert(self, mapped) -> np.ndarray:
        m = as_samples(mapped)
        if m.size == 0:
            return m.copy()
        order = np.argsort(self.target_offsets, kind="stable")
        t_sorted = self.target_offsets[order]
        lo_sorted = self.lower_bounds[order]
        w_sorted = self.widths()[order]
        idx = np.searchsorted(t_sorted, m, side="right") - 1
        bad = (idx < 0) | (m - t_sorted[np.clip(idx, 0, None)] >= w_sorted[np.clip(idx, 0, None)])
        if np.any(bad):
            raise FormatError("value not in QuaRs map")
        return m - t_sorted[idx] + lo_sorted[idx]

    def to_bytes(self) -> bytes:
        """bin count u16, per bin (lower bound i32, target offset i32),
        then the exclusive upper bound of the observed range as i32.
        All little-endian."""
        if self.bin_count > 0xFFFF:
            raise ValueError("too many bins to serialize")
        parts = [struct.pack("<H", self.bin_count)]
        for lo, off in zip(self.lower_bounds.tolist(), self.target_offsets.tolist()):
            parts.append(struct.pack("<ii", lo, off))
        parts.append(struct.pack("<i", self.upper_exclusive))
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "QuarsMap":
        if len(data) < 2:
            raise FormatError("truncated QuaRs map")
        (count,) = struct.unpack_from("<H", data, 0)
        need = 2 + 8 * count + 4
        if len(data) < need:
            raise FormatError("truncated QuaRs map")
        lows = np.empty(count, dtype=np.int64)
        offs = np.empty(count, dtype=np.int64)
        for i in range(count):
            lo, off = struct.unpack_from("<ii", data, 2 + 8 * i)
            lows[i] = lo
            offs[i] = off
        (upper,) = struct.unpack_from("<i", data, 2 + 8 * count)
        if count == 0 or np.any(np.diff(lows) <= 0) or upper <= lows[-1]:
            raise FormatError("invalid QuaRs map")
        return cls(lower_bounds=lows, target_offsets=offs, upper_exclusive=int(upper))

    @property
    def byte_size(self) -> int:
        return 2 + 8 * self.bin_count + 4


def quars_encode(series, bin_count: int = DEFAULT_QUARS_BINS) -> tuple[np.ndarray, QuarsMap]:
    """Fit and apply quantile reshuffling.

    Observed values are cut into at most ``bin_count`` quantile bins of
    near-equal sample mass (one bin per distinct value when cardinality
    allows). Bins are ranked by occurrence density, count per covered
    value, so the most frequent values land in the lowest ranks even when
    equal-mass binning makes raw counts indistinguishable; ties break by
    ascending lower bound. Rank 0 is placed at 0 and later ranks alternate
    on the positive and negative side. Cardinality is preserved because
    the map is a bijection on the observed values.
    """
    x = as_samples(series)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    values, counts = np.unique(x, return_counts=True)
    if values.size <= bin_count:
        first = np.arange(values.size)
    else:
        cum_before = np.cumsum(counts) - counts
        bin_idx = (cum_before * bin_count) // x.size
        first = np.unique(bin_idx, return_index=True)[1]
    last = np.r_[first[1:] - 1, values.size - 1]
    los = values[first]
    his = values[last]
    widths = his - los + 1
    bin_counts = np.add.reduceat(counts, first)
    density = bin_counts / widths
    order = np.lexsort((los, -density))  # density desc, then lower bound asc
    offsets = np.zeros(order.size, dtype=np.int64)
    pos = 0
    neg = 0
    for rank, b in enumerate(order.tolist()):
        w = int(widths[b])
        if rank == 0:
            offsets[b] = 0
            pos = w
        elif rank % 2 == 1:
            offsets[b] = pos
            pos += w
        else:
            neg -= w
            offsets[b] = neg
    qmap = QuarsMap(
        lower_bounds=los.astype(np.int64),
        target_offsets=offsets,
        upper_exclusive=int(values[-1]) + 1,
    )
    return qmap.apply(x), qmap


def quars_decode(mapped, qmap: QuarsMap) -> np.ndarray:
    """Exact inverse of :func:`quars_encode` via the stored bijection."""
    return qmap.invert(mapped)


@dataclass(frozen=True)
class TransformChain:
    """Ordered transform stages plus the QuaRs bin budget.

    Stage ids must be unique; the container layer additionally restricts
    accepted chains to the canonical delta -> rle0 -> quars order.
    """

    stages: tuple[str, ...] = ()
    quars_bins: int = DEFAULT_QUARS_BINS

    def __post_init__(self):
        for s in self.stages:
            if s not in TRANSFORM_ORDER:
                raise ValueError(f"unknown transform {s!r}")
        if len(set(self.stages)) != len(self.stages):
            raise ValueError("duplicate transform stage")
        if self.quars_bins < 1:
            raise ValueError("quars_bins must be >= 1")

    @classmethod
    def parse(cls, text: str, quars_bins: int = DEFAULT_QUARS_BINS) -> "TransformChain":
        text = text.strip()
        if text in ("", "none"):
            return cls((), quars_bins)
        return cls(tuple(s.strip() for s in text.split(",")), quars_bins)

    def label(self) -> str:
        return ",".join(self.stages) if self.stages else "none"


def chain_apply(series, chain: TransformChain) -> tuple[np.ndarray, QuarsMap | None]:
    """Apply the stages in order; returns the tokens and the QuaRs side map."""
    x = as_samples(series)
    qmap = None
    for stage in chain.stages:
        if stage == "delta":
            x = delta_encode(x)
        elif stage == "rle0":
            x = rle0_encode(x)
        elif stage == "quars":
            x, qmap = quars_encode(x, chain.quars_bins)
    return x, qmap


def chain_invert(tokens, chain: TransformChain, qmap: QuarsMap | None = None) -> np.ndarray:
    """Invert :func:`chain_apply`; stages are undone in reverse order."""
    x = as_samples(tokens)
    for stage in reversed(chain.stages):
        if stage == "delta":
            x = delta_decode(x)
        elif stage == "rle0":
            x = rle0_decode(x)
        elif stage == "quars":
            if qmap is None:
                raise ValueError("quars stage requires its side map")
            x = quars_decode(x, qmap)
    return x
