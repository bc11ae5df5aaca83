"""Shared domain types and deterministic scaling utilities.

All types are immutable after construction and safe to share across
threads; the functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "TimeSeries",
    "Piece",
    "ScaledPoint",
    "ScalingMeta",
    "Codebook",
    "SymbolicSeries",
    "std_dev",
    "scale_pieces",
    "scale_arrays",
    "unscale",
    "znormalize",
    "symbol_name",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=arr.dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class TimeSeries:
    """A univariate sequence of finite real values, optionally named/labelled."""

    values: np.ndarray
    name: str | None = None
    label: str | None = None

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.values, dtype=float))
        if arr.ndim != 1:
            raise ValueError("time series values must be one-dimensional")
        if arr.size < 1:
            raise ValueError("time series must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise ValueError("time series values must be finite")
        object.__setattr__(self, "values", _freeze(arr))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def steps(self) -> int:
        """Number of unit steps between the first and last value."""
        return len(self) - 1


def as_series(data, name: str | None = None) -> TimeSeries:
    """Coerce an array-like (or pass through a TimeSeries) into a TimeSeries."""
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(np.asarray(data, dtype=float), name=name)


@dataclass(frozen=True)
class Piece:
    """One polygonal-chain segment: `len` time steps covering a value change of `inc`."""

    len: int
    inc: float

    def __post_init__(self) -> None:
        if int(self.len) != self.len or self.len < 1:
            raise ValueError("invalid piece: len must be an integer >= 1")
        object.__setattr__(self, "len", int(self.len))
        object.__setattr__(self, "inc", float(self.inc))


@dataclass(frozen=True)
class ScaledPoint:
    """A piece mapped into the 2-d grouping plane, remembering its pre-sort index."""

    x: float
    y: float
    origin_index: int


@dataclass(frozen=True)
class ScalingMeta:
    """Scaling factors actually applied to the pieces, plus what inversion needs.

    ``sigma_len``/``sigma_inc`` are the divisors used (after the zero guard,
    so they are never 0).  ``mean``/``std`` describe the z-normalization of
    the raw series when ``normalize`` is set; ``std`` keeps the true value,
    which may be 0 for a constant series.
    """

    sigma_len: float
    sigma_inc: float
    scl: float
    start_value: float
    normalize: bool = False
    mean: float = 0.0
    std: float = 1.0


@dataclass(frozen=True)
class Codebook:
    """Ordered map from symbol id to the unscaled group mean (center_len, center_inc)."""

    entries: dict[int, tuple[float, float]]

    def __post_init__(self) -> None:
        if len(self.entries) < 1:
            raise ValueError("codebook must contain at least one entry")
        clean: dict[int, tuple[float, float]] = {}
        for key, (center_len, center_inc) in self.entries.items():
            if center_len <= 0:
                raise ValueError("codebook center_len must be positive")
            clean[int(key)] = (float(center_len), float(center_inc))
        object.__setattr__(self, "entries", clean)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, symbol: int) -> bool:
        return int(symbol) in self.entries

    def __getitem__(self, symbol: int) -> tuple[float, float]:
        return self.entries[int(symbol)]

    def items(self):
        return self.entries.items()


@dataclass(frozen=True)
class SymbolicSeries:
    """Symbol sequence plus the codebook and scaling metadata needed for inversion."""

    symbols: np.ndarray
    codebook: Codebook
    scaling: ScalingMeta

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.symbols, dtype=int))
        for s in arr:
            if int(s) not in self.codebook:
                raise ValueError(f"symbol {int(s)} missing from codebook")
        object.__setattr__(self, "symbols", _freeze(arr))

    def __len__(self) -> int:
        return int(self.symbols.size)


def std_dev(values) -> float:
    """Population standard deviation (divide by n, not n-1)."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("empty sequence")
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2)))


def scale_arrays(lens: np.ndarray, incs: np.ndarray, scl: float) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Scale raw (len, inc) arrays into the grouping plane.

    Lengths and increments are divided by their population standard
    deviations, with 1 substituted for a zero deviation; the length axis is
    additionally weighted by ``scl``.  Returns (x, y, sigma_len, sigma_inc)
    where the sigmas are the divisors actually used.
    """
    if scl < 0:
        raise ValueError("scl must be >= 0")
    sigma_len = std_dev(lens)
    sigma_inc = std_dev(incs)
    s_len = sigma_len if sigma_len > 0 else 1.0
    s_inc = sigma_inc if sigma_inc > 0 else 1.0
    xs = scl * np.asarray(lens, dtype=float) / s_len
    ys = np.asarray(incs, dtype=float) / s_inc
    return xs, ys, s_len, s_inc


def scale_pieces(
    pieces: Sequence[Piece], scl: float, start_value: float = 0.0
) -> tuple[list[ScaledPoint], ScalingMeta]:
    """Map pieces to ScaledPoints; ``scl == 0`` collapses the length axis to 0."""
    if len(pieces) == 0:
        raise ValueError("at least one piece required")
    lens = np.array([p.len for p in pieces], dtype=float)
    incs = np.array([p.inc for p in pieces], dtype=float)
    xs, ys, s_len, s_inc = scale_arrays(lens, incs, scl)
    points = [ScaledPoint(float(x), float(y), i) for i, (x, y) in enumerate(zip(xs, ys))]
    meta = ScalingMeta(sigma_len=s_len, sigma_inc=s_inc, scl=scl, start_value=float(start_value))
    return points, meta


def unscale(meta: ScalingMeta, x: float, y: float) -> tuple[float, float]:
    """Invert the scaling of a single point; requires ``scl > 0`` for the length axis."""
    if meta.scl == 0:
        raise ValueError("length axis is not invertible when scl == 0")
    return x * meta.sigma_len / meta.scl, y * meta.sigma_inc


def znormalize(values) -> tuple[np.ndarray, float, float]:
    """Z-normalize; returns (z, mean, std) with the true population std.

    A zero std (constant input) divides by 1 instead, so ``z`` is all zeros;
    de-normalizing then multiplies by the stored 0 and recovers the constant.
    """
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = std_dev(arr)
    z = (arr - mean) / (std if std > 0 else 1.0)
    return z, mean, std


def symbol_name(symbol: int) -> str:
    """Display name for an integer symbol id: 0..25 -> 'a'..'z', beyond -> 's<id>'."""
    symbol = int(symbol)
    if symbol < 0:
        raise ValueError("symbol ids are non-negative")
    if symbol < 26:
        return chr(ord("a") + symbol)
    return f"s{symbol}"
