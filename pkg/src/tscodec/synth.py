"""Deterministic generators for the four synthetic test signals.

The cases isolate one signal characteristic each:

* ``sine``       - slowly varying relative to the sampling rate
* ``noise``      - i.i.d. uniform integers, maximum entropy for its alphabet
* ``sine_noise`` - elementwise sum of the two, noise as the bottleneck
* ``switching``  - piecewise constant over few levels at short intervals:
  low cardinality but high average magnitude

Randomness comes from PCG64 seeded through ``SeedSequence(seed,
spawn_key=(case, component))``, so a (case, seed) pair yields the same
samples on every platform, and the noise inside ``sine_noise`` is an
independent stream from the plain ``noise`` case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries

CASES = ("sine", "noise", "sine_noise", "switching")

_CASE_INDEX = {name: i for i, name in enumerate(CASES)}


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic series; same spec + seed, same samples.

    The sine period of 997 samples (not a divisor of the default length)
    lets the phase drift across cycles, which keeps the raw cardinality in
    the high hundreds while the delta alphabet stays tiny. The switching
    dwell is a narrow uniform window so the run-length alphabet after
    delta + rle0 stays small, which is where quantile reshuffling pays.
    """

    case: str
    n: int = 10000
    seed: int = 0
    amplitude: int = 1000
    period: float = 997.0
    noise_half_range: int = 98
    levels: tuple[int, ...] = (-700, -200, 0, 300, 800)
    dwell_min: int = 5
    dwell_max: int = 9

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}; expected one of {CASES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.dwell_min <= self.dwell_max:
            raise ValueError("dwell window must satisfy 1 <= min <= max")
        if len(self.levels) < 2 or len(set(self.levels)) != len(self.levels):
            raise ValueError("levels must be at least two distinct values")


def _rng(spec: SynthSpec, component: int) -> np.random.Generator:
    seq = np.random.SeedSequence(
        entropy=spec.seed, spawn_key=(_CASE_INDEX[spec.case], component)
    )
    return np.random.Generator(np.random.PCG64(seq))


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def _sine(spec: SynthSpec) -> np.ndarray:
    k = np.arange(spec.n)
    return _round_half_away(spec.amplitude * np.sin(2.0 * np.pi * k / spec.period))


def _noise(spec: SynthSpec, component: int) -> np.ndarray:
    a = spec.noise_half_range
    return _rng(spec, component).integers(-a, a + 1, size=spec.n, dtype=np.int64)


def _switching(spec: SynthSpec) -> np.ndarray:
    rng = _rng(spec, 0)
    levels = np.asarray(spec.levels, dtype=np.int64)
    out = np.empty(spec.n, dtype=np.int64)
    pos = 0
    current = int(levels[rng.integers(0, levels.size)])
    while pos < spec.n:
        dwell = int(rng.integers(spec.dwell_min, spec.dwell_max + 1))
        end = min(pos + dwell, spec.n)
        out[pos:end] = current
        pos = end
        others = levels[levels != current]
        current = int(others[rng.integers(0, others.size)])
    return out


def generate(spec: SynthSpec) -> TimeSeries:
    """Generate one channel for the given spec, reproducibly."""
    if spec.case == "sine":
        samples = _sine(spec)
    elif spec.case == "noise":
        samples = _noise(spec, 0)
    elif spec.case == "sine_noise":
        samples = _sine(spec) + _noise(spec, 1)
    else:
        samples = _switching(spec)
    return TimeSeries(samples=samples, channel_id=0)


def suite(n: int = 10000, seed: int = 0) -> dict[str, TimeSeries]:
    """All four cases with default parameters."""
    return {case: generate(SynthSpec(case=case, n=n, seed=seed)) for case in CASES}
