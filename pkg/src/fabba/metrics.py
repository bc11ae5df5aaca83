"""Distances and evaluation scores: Euclidean, MSE, DTW, differencing,
adjusted Rand index, and compression/digitization rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries

__all__ = [
    "ReconstructionReport",
    "euclid",
    "mse",
    "dtw",
    "difference",
    "adjusted_rand",
    "rates",
]


@dataclass(frozen=True)
class ReconstructionReport:
    """Per-series scores for one symbolic method."""

    euclid: float
    mse: float
    dtw: float
    euclid_diff: float
    dtw_diff: float
    tau_c: float
    tau_d: float
    k: int
    n: int
    runtime_ms: float
    dist_count: int


def _values(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    return np.asarray(x, dtype=float)


def _paired(a, b) -> tuple[np.ndarray, np.ndarray]:
    va, vb = _values(a), _values(b)
    if va.size != vb.size:
        raise ValueError("length mismatch")
    return va, vb


def euclid(a, b) -> float:
    """Euclidean distance between equal-length series."""
    va, vb = _paired(a, b)
    return float(np.sqrt(np.sum((va - vb) ** 2)))


def mse(a, b) -> float:
    """Mean squared error between equal-length series."""
    va, vb = _paired(a, b)
    return float(np.mean((va - vb) ** 2))


def dtw(a, b) -> float:
    """Dynamic time warping distance with squared local costs.

    Full dynamic program, no window; returns the square root of the optimal
    accumulated cost.  The inner recurrence is solved one row at a time: with
    entry costs E and cost prefix sums C, row values are
    ``C + running_min(E - C)``, which keeps the whole computation vectorized.
    """
    va, vb = _values(a), _values(b)
    if va.size == 0 or vb.size == 0:
        raise ValueError("empty series")
    # Iterate over the shorter axis; memory stays O(min(len)).
    if va.size < vb.size:
        va, vb = vb, va
    cost0 = (va[0] - vb) ** 2
    dp = np.cumsum(cost0)
    entry = np.empty_like(dp)
    for i in range(1, va.size):
        c = (va[i] - vb) ** 2
        entry[0] = dp[0] + c[0]
        entry[1:] = c[1:] + np.minimum(dp[1:], dp[:-1])
        cum = np.cumsum(c)
        dp = cum + np.minimum.accumulate(entry - cum)
    return float(np.sqrt(dp[-1]))


def difference(series) -> TimeSeries:
    """First differences; output is one shorter than the input."""
    vals = _values(series)
    if vals.size < 2:
        raise ValueError("series too short to difference")
    return TimeSeries(np.diff(vals))


def adjusted_rand(labels_a, labels_b) -> float:
    """Chance-adjusted Rand index between two partitions of the same items."""
    la = np.asarray(labels_a).ravel()
    lb = np.asarray(labels_b).ravel()
    if la.size != lb.size:
        raise ValueError("length mismatch")
    if la.size < 2:
        raise ValueError("need at least two items")
    _, ia = np.unique(la, return_inverse=True)
    _, ib = np.unique(lb, return_inverse=True)
    cont = np.zeros((ia.max() + 1, ib.max() + 1))
    np.add.at(cont, (ia, ib), 1.0)

    def comb2(x):
        return x * (x - 1.0) / 2.0

    sum_cells = comb2(cont).sum()
    sum_a = comb2(cont.sum(axis=1)).sum()
    sum_b = comb2(cont.sum(axis=0)).sum()
    total = comb2(float(la.size))
    expected = sum_a * sum_b / total
    denom = 0.5 * (sum_a + sum_b) - expected
    if denom == 0.0:
        # Both partitions trivial in the same way: perfect agreement.
        return 1.0
    return float((sum_cells - expected) / denom)


def rates(n: int, big_n: int, k: int) -> tuple[float, float]:
    """Compression rate n/N and digitization rate k/n."""
    if not (1 <= n <= big_n):
        raise ValueError("need 1 <= n <= N")
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    return n / big_n, k / n
