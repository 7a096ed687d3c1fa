"""CSV loading and float-to-16-bit re-quantization.

Real-world datasets usually arrive as floating point even when the source
was an ADC with a fixed value count. Each column is rescaled to the full
signed 16-bit span and floored:

    q = floor((x - lo) * 65535 / (hi - lo)) - 32768

so the quantization error is bounded by one step, (hi - lo) / 65535.
Columns that are already integral and within the 16-bit range pass through
unchanged and are marked as identity-quantized.

Expected CSV shape: comma separated, UTF-8, decimal point '.', optional
single header row, one sample per row per channel column.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import INT16_MAX, INT16_MIN, TimeSeries

QUANT_STEPS = 65535


@dataclass(frozen=True)
class ChannelQuantization:
    """Per-channel scaling metadata; enough to invert up to one step."""

    lo: float
    hi: float
    identity: bool = False

    @property
    def scale(self) -> float:
        if self.identity or self.hi == self.lo:
            return 1.0
        return QUANT_STEPS / (self.hi - self.lo)


@dataclass
class Dataset:
    """Named multichannel series with provenance and quantization info."""

    name: str
    channels: list[TimeSeries]
    provenance: list[str] = field(default_factory=list)
    quantization: list[ChannelQuantization] = field(default_factory=list)
    dropped_rows: int = 0


def quantize_column(values) -> tuple[np.ndarray, ChannelQuantization]:
    """Quantize one float column to signed 16-bit integers."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("undefined on empty input")
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        shown = ", ".join(str(i) for i in bad[:20].tolist())
        more = "" if bad.size <= 20 else f" (+{bad.size - 20} more)"
        raise ValueError(f"non-finite values at rows: {shown}{more}")
    lo = float(x.min())
    hi = float(x.max())
    if hi == lo:
        q = np.zeros(x.size, dtype=np.int64)
    else:
        # Ratio first: (x - lo) / (hi - lo) stays in [0, 1] even when the
        # span is subnormal, where 65535 / (hi - lo) would overflow.
        q = np.floor((x - lo) / (hi - lo) * QUANT_STEPS).astype(np.int64) - 32768
        np.clip(q, INT16_MIN, INT16_MAX, out=q)
    return q, ChannelQuantization(lo=lo, hi=hi)


def dequantize_column(q, meta: ChannelQuantization) -> np.ndarray:
    """Approximate inverse; error is at most one quantization step."""
    arr = np.asarray(q, dtype=np.float64)
    if meta.identity:
        return arr.copy()
    if meta.hi == meta.lo:
        return np.full(arr.shape, meta.lo)
    return meta.lo + (arr + 32768) * ((meta.hi - meta.lo) / QUANT_STEPS)


def _is_integral_16bit(x: np.ndarray) -> bool:
    if not np.all(np.isfinite(x)):
        return False
    if not np.all(x == np.floor(x)):
        return False
    return INT16_MIN <= float(x.min()) and float(x.max()) <= INT16_MAX


def ingest_column(values) -> tuple[np.ndarray, ChannelQuantization]:
    """Quantize unless the column is already integral and in range."""
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("undefined on empty input")
    if _is_integral_16bit(x):
        q = x.astype(np.int64)
        return q, ChannelQuantization(lo=float(x.min()), hi=float(x.max()), identity=True)
    return quantize_column(x)


def _parse_cell(text: str, row: int, col) -> float:
    cell = text.strip()
    if cell == "":
        return math.nan  # missing marker, resolved by policy
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"unparseable numeric cell at row {row}, column {col}: {cell!r}") from None


def load_csv(
    path,
    columns: list[int | str] | None = None,
    has_header: bool | str = "auto",
    missing: str = "drop",
    name: str | None = None,
) -> Dataset:
    """Load selected numeric columns of a CSV file as one dataset.

    ``columns`` selects by zero-based index or by header name; None takes
    every column. ``missing`` is either "drop" (remove the whole row,
    count reported on the dataset) or "error".
    """
    if missing not in ("drop", "error"):
        raise ValueError('missing policy must be "drop" or "error"')
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError(f"{path}: empty file")

    header: list[str] | None = None
    if has_header == "auto":
        def _numeric(cell: str) -> bool:
            try:
                float(cell)
                return True
            except ValueError:
                return cell.strip() == ""

        if not all(_numeric(c) for c in rows[0]):
            header = [c.strip() for c in rows[0]]
            rows = rows[1:]
    elif has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    ncols = len(rows[0])
    if columns is None:
        selected = list(range(ncols))
    else:
        selected = []
        for c in columns:
            if isinstance(c, str):
                if header is None or c not in header:
                    raise ValueError(f"unknown column name {c!r}")
                selected.append(header.index(c))
            else:
                if not 0 <= c < ncols:
                    raise ValueError(f"column index {c} out of range")
                selected.append(c)

    data = np.empty((len(rows), len(selected)), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) < ncols:
            raise ValueError(f"{path}: row {i} has {len(row)} cells, expected {ncols}")
        for j, c in enumerate(selected):
            label = header[c] if header else c
            data[i, j] = _parse_cell(row[c], i, label)

    missing_mask = np.isnan(data)
    dropped = 0
    if missing_mask.any():
        if missing == "error":
            i, j = np.argwhere(missing_mask)[0]
            label = header[selected[j]] if header else selected[j]
            raise ValueError(f"{path}: missing value at row {int(i)}, column {label}")
        keep = ~missing_mask.any(axis=1)
        dropped = int((~keep).sum())
        data = data[keep]
        if data.shape[0] == 0:
            raise ValueError(f"{path}: all rows dropped by missing-value policy")

    channels = []
    quant = []
    for j in range(data.shape[1]):
        q, meta = ingest_column(data[:, j])
        channels.append(TimeSeries(samples=q, channel_id=j))
        quant.append(meta)
    return Dataset(
        name=name or path.stem,
        channels=channels,
        provenance=[str(path)],
        quantization=quant,
        dropped_rows=dropped,
    )


def write_csv(path, channels: list[TimeSeries], header: bool = True) -> None:
    """Write channels column-wise; inverse of loading an integer CSV."""
    arrays = [ch.samples for ch in channels]
    if not arrays:
        raise ValueError("no channels to write")
    n = max(a.size for a in arrays)
    if any(a.size != n for a in arrays):
        raise ValueError("channels of unequal length")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow([f"ch{ch.channel_id}" for ch in channels])
        for i in range(n):
            writer.writerow([int(a[i]) for a in arrays])
