"""Adaptive piecewise-linear compression of a time series into pieces.

A piece spanning indices a..b approximates the values by the straight line
through its two endpoints; the squared deviation from that line must stay
within ``(b - a - 1) * tol**2``.  Pieces are grown greedily one index at a
time and emitted when the next extension would break the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Piece, TimeSeries, as_series

__all__ = ["CompressionConfig", "compress", "inverse_compress", "residual_check", "piece_residual"]


@dataclass(frozen=True)
class CompressionConfig:
    """Compression tolerance (in value units) and an optional piece-length cap."""

    tol: float
    max_len: int | None = None

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_len is not None and self.max_len < 1:
            raise ValueError("max_len must be >= 1")


def compress(series, cfg: CompressionConfig) -> list[Piece]:
    """Split a series into greedily maximal linear pieces.

    Starting from the previous knot, each piece is extended one index at a
    time for as long as the squared-residual bound holds (and the optional
    ``max_len`` cap is not hit); the first violating extension ends the
    piece.  Piece lengths always sum to ``len(series) - 1``.
    """
    series = as_series(series)
    t = series.values
    n_steps = series.steps
    if len(series) < 2:
        raise ValueError("series too short")

    tol_sq = cfg.tol * cfg.tol
    pieces: list[Piece] = []
    a = 0
    while a < n_steps:
        cap = n_steps if cfg.max_len is None else min(n_steps, a + cfg.max_len)
        t_a = t[a]
        # Running sums over the offsets u_m = t[a+m] - t[a]; the residual of a
        # candidate piece of length L with slope c = u_L / L is
        # c^2 * sum(m^2) - 2c * sum(m*u_m) + sum(u_m^2), an O(1) update per step.
        b = a + 1
        u = t[b] - t_a
        sum_mu = u
        sum_uu = u * u
        while b < cap:
            u_next = t[b + 1] - t_a
            length = b + 1 - a
            s_mu = sum_mu + length * u_next
            s_uu = sum_uu + u_next * u_next
            sum_m2 = length * (length + 1) * (2 * length + 1) / 6.0
            c = u_next / length
            residual = c * c * sum_m2 - 2.0 * c * s_mu + s_uu
            if residual <= (length - 1) * tol_sq:
                b += 1
                sum_mu = s_mu
                sum_uu = s_uu
            else:
                break
        pieces.append(Piece(b - a, float(t[b] - t_a)))
        a = b
    return pieces


def _as_piece(p) -> Piece:
    if isinstance(p, Piece):
        return p
    length, inc = p
    if int(length) != length or length < 1:
        raise ValueError("invalid piece")
    return Piece(int(length), float(inc))


def inverse_compress(start_value: float, pieces: Sequence[Piece]) -> TimeSeries:
    """Rebuild the polygonal chain exactly: knots are cumulative increment sums,
    interior values interpolate linearly within each piece."""
    plist = [_as_piece(p) for p in pieces]
    if not plist:
        raise ValueError("invalid piece")
    total = sum(p.len for p in plist)
    out = np.empty(total + 1, dtype=float)
    out[0] = start_value
    knot = float(start_value)
    pos = 0
    for p in plist:
        nxt = knot + p.inc
        if p.len > 1:
            m = np.arange(1, p.len)
            out[pos + 1 : pos + p.len] = knot + p.inc * (m / p.len)
        out[pos + p.len] = nxt
        pos += p.len
        knot = nxt
    return TimeSeries(out)


def piece_residual(values: np.ndarray, start: int, end: int) -> float:
    """Squared deviation of values[start..end] from the line through its endpoints.

    Only interior indices contribute; the endpoints lie on the line by
    construction.
    """
    length = end - start
    if length <= 1:
        return 0.0
    inc = values[end] - values[start]
    m = np.arange(1, length)
    line = values[start] + inc * (m / length)
    diff = line - values[start + 1 : end]
    return float(np.dot(diff, diff))


def residual_check(series, pieces: Sequence[Piece], tol: float) -> bool:
    """True iff every piece satisfies the squared-residual bound on this series."""
    series = as_series(series)
    plist = [_as_piece(p) for p in pieces]
    if sum(p.len for p in plist) != series.steps:
        raise ValueError("piece lengths do not cover the series")
    tol_sq = tol * tol
    pos = 0
    for p in plist:
        if piece_residual(series.values, pos, pos + p.len) > (p.len - 1) * tol_sq:
            return False
        pos += p.len
    return True
