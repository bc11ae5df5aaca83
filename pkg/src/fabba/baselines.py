"""Comparison methods: k-means++ clustering, variance-bounded k-search
digitization over pieces, and the SAX / 1d-SAX transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .core import Piece, TimeSeries, as_series, scale_arrays, znormalize

__all__ = [
    "KMeansResult",
    "SaxConfig",
    "kmeans_pp",
    "abba_digitize",
    "kmeans_digitize",
    "gaussian_breakpoints",
    "sax_transform",
    "sax_inverse",
    "onedsax_transform",
    "onedsax_inverse",
    "split_symbol_budget",
]

# Slope spread of a least-squares fit over a unit-variance segment of length L
# is well modelled by a centered Gaussian with variance SLOPE_VARIANCE_SCALE/L.
SLOPE_VARIANCE_SCALE = 0.03


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    iterations: int
    history: tuple[float, ...] = ()


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def kmeans_pp(points, k: int, seed: int = 0, max_iter: int = 300, restarts: int = 1) -> KMeansResult:
    """Seeded k-means++ initialization followed by Lloyd iterations.

    Converges at an assignment fixpoint or after ``max_iter`` iterations.
    Deterministic for a given seed; with ``restarts > 1`` the lowest-inertia
    run wins.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array")
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= number of points")

    best: KMeansResult | None = None
    for restart in range(restarts):
        rng = np.random.default_rng(seed + restart)
        result = _kmeans_single(pts, k, rng, max_iter)
        if best is None or result.inertia < best.inertia:
            best = result
    return best


def _kmeans_single(pts: np.ndarray, k: int, rng: np.random.Generator, max_iter: int) -> KMeansResult:
    n = pts.shape[0]
    centers = np.empty((k, pts.shape[1]))
    centers[0] = pts[rng.integers(n)]
    closest_sq = np.sum((pts - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = closest_sq.sum()
        if total > 0:
            probs = closest_sq / total
            idx = rng.choice(n, p=probs)
        else:
            idx = rng.integers(n)
        centers[c] = pts[idx]
        closest_sq = np.minimum(closest_sq, np.sum((pts - centers[c]) ** 2, axis=1))

    labels = np.full(n, -1, dtype=int)
    history: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        dists = _sq_dists(pts, centers)
        new_labels = np.argmin(dists, axis=1)
        history.append(float(dists[np.arange(n), new_labels].sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = pts[labels == c]
            if members.shape[0]:
                centers[c] = members.mean(axis=0)
    inertia = float(np.sum((pts - centers[labels]) ** 2))
    return KMeansResult(
        centers=centers,
        labels=labels,
        inertia=inertia,
        iterations=iterations,
        history=tuple(history),
    )


def _cluster_variances(lens: np.ndarray, incs: np.ndarray, labels: np.ndarray, k: int) -> tuple[float, float]:
    """Max within-cluster variance of the unscaled lengths and increments."""
    var_len = 0.0
    var_inc = 0.0
    for c in range(k):
        mask = labels == c
        if not np.any(mask):
            continue
        var_len = max(var_len, float(np.mean((lens[mask] - lens[mask].mean()) ** 2)))
        var_inc = max(var_inc, float(np.mean((incs[mask] - incs[mask].mean()) ** 2)))
    return var_len, var_inc


def abba_digitize(pieces: Sequence[Piece], tol_s: float, scl: float = 1.0, seed: int = 0):
    """Smallest k whose k-means clusters keep both unscaled variances in check.

    Scans k = 1, 2, ... running seeded k-means++ on the scaled tuples until
    ``max(scl * Var_len, Var_inc) <= tol_s**2`` where the variances are taken
    over the raw (len, inc) values per cluster.  Returns (labels, centers, k)
    with centers as unscaled cluster means.
    """
    if not tol_s > 0:
        raise ValueError("tol_s must be positive")
    lens = np.array([p.len for p in pieces], dtype=float)
    incs = np.array([p.inc for p in pieces], dtype=float)
    xs, ys, _, _ = scale_arrays(lens, incs, scl)
    pts = np.column_stack((xs, ys))
    n = pts.shape[0]
    bound = tol_s * tol_s
    for k in range(1, n + 1):
        res = kmeans_pp(pts, k, seed=seed)
        var_len, var_inc = _cluster_variances(lens, incs, res.labels, k)
        if max(scl * var_len, var_inc) <= bound:
            return _compact(res.labels, lens, incs)
    raise AssertionError("unreachable: singletons have zero variance")


def kmeans_digitize(pieces: Sequence[Piece], k: int, scl: float = 1.0, seed: int = 0):
    """k-means++ digitization of pieces at a fixed cluster count.

    Returns (labels, centers, k_used) with unscaled centers; clusters left
    empty by Lloyd's updates are dropped and labels renumbered compactly.
    """
    lens = np.array([p.len for p in pieces], dtype=float)
    incs = np.array([p.inc for p in pieces], dtype=float)
    xs, ys, _, _ = scale_arrays(lens, incs, scl)
    res = kmeans_pp(np.column_stack((xs, ys)), k, seed=seed)
    return _compact(res.labels, lens, incs)


def _compact(labels: np.ndarray, lens: np.ndarray, incs: np.ndarray):
    used, labels = np.unique(labels, return_inverse=True)
    k = used.size
    sizes = np.bincount(labels, minlength=k)
    centers = np.column_stack(
        (
            np.bincount(labels, weights=lens, minlength=k) / sizes,
            np.bincount(labels, weights=incs, minlength=k) / sizes,
        )
    )
    return labels, centers, k


# ---------------------------------------------------------------------------
# SAX / 1d-SAX
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SaxConfig:
    n_segments: int
    alphabet_size: int | None = None
    mean_alphabet: int | None = None
    slope_alphabet: int | None = None

    def __post_init__(self) -> None:
        if self.n_segments < 1:
            raise ValueError("n_segments must be >= 1")
        for size in (self.alphabet_size, self.mean_alphabet, self.slope_alphabet):
            if size is not None and size < 2:
                raise ValueError("alphabet sizes must be >= 2")


def gaussian_breakpoints(alphabet_size: int) -> np.ndarray:
    """Standard-normal quantiles at i/a for i = 1..a-1."""
    if alphabet_size < 2:
        raise ValueError("alphabet sizes must be >= 2")
    return norm.ppf(np.arange(1, alphabet_size) / alphabet_size)


def _cell_values(breakpoints: np.ndarray) -> np.ndarray:
    """Reconstruction value per cell: interior midpoints, outer cells mirrored
    one half-gap beyond the edge breakpoints."""
    a = breakpoints.size + 1
    if a == 2:
        # No interior cell to borrow a gap from; fall back to the quartile
        # centers of the two halves.
        return np.array([norm.ppf(0.25), norm.ppf(0.75)])
    vals = np.empty(a)
    vals[1:-1] = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    vals[0] = breakpoints[0] - 0.5 * (breakpoints[1] - breakpoints[0])
    vals[-1] = breakpoints[-1] + 0.5 * (breakpoints[-1] - breakpoints[-2])
    return vals


def _segment_lengths(length: int, n_segments: int) -> np.ndarray:
    if n_segments > length:
        raise ValueError("n_segments exceeds series length")
    base, rem = divmod(length, n_segments)
    out = np.full(n_segments, base, dtype=int)
    out[:rem] += 1
    return out


def _segment_slices(length: int, n_segments: int) -> list[slice]:
    lengths = _segment_lengths(length, n_segments)
    offsets = np.concatenate(([0], np.cumsum(lengths)))
    return [slice(int(offsets[i]), int(offsets[i + 1])) for i in range(n_segments)]


def sax_transform(series, cfg: SaxConfig) -> np.ndarray:
    """Segment means of the z-normalized series, quantized against Gaussian
    breakpoints; returns one integer cell index per segment."""
    if cfg.alphabet_size is None:
        raise ValueError("alphabet_size required for SAX")
    series = as_series(series)
    z, _, _ = znormalize(series.values)
    slices = _segment_slices(z.size, cfg.n_segments)
    means = np.array([z[s].mean() for s in slices])
    return np.digitize(means, gaussian_breakpoints(cfg.alphabet_size))


def sax_inverse(symbols, cfg: SaxConfig, mean: float, std: float, length: int) -> TimeSeries:
    """Piecewise-constant reconstruction from SAX symbols, de-normalized."""
    if cfg.alphabet_size is None:
        raise ValueError("alphabet_size required for SAX")
    cells = _cell_values(gaussian_breakpoints(cfg.alphabet_size))
    slices = _segment_slices(length, cfg.n_segments)
    out = np.empty(length)
    for sym, s in zip(symbols, slices):
        out[s] = cells[int(sym)]
    return TimeSeries(out * std + mean)


def onedsax_transform(series, cfg: SaxConfig) -> np.ndarray:
    """Per segment, quantize the least-squares line's midpoint value and slope.

    Midpoint values use the standard Gaussian breakpoints; slopes use the
    same breakpoints scaled by sqrt(SLOPE_VARIANCE_SCALE / L) for a segment
    of length L.  Returns an (n_segments, 2) array of (mean cell, slope cell).
    """
    if cfg.mean_alphabet is None or cfg.slope_alphabet is None:
        raise ValueError("mean_alphabet and slope_alphabet required for 1d-SAX")
    series = as_series(series)
    z, _, _ = znormalize(series.values)
    slices = _segment_slices(z.size, cfg.n_segments)
    mean_bp = gaussian_breakpoints(cfg.mean_alphabet)
    slope_bp = gaussian_breakpoints(cfg.slope_alphabet)
    out = np.empty((cfg.n_segments, 2), dtype=int)
    for i, s in enumerate(slices):
        seg = z[s]
        mid, slope = _fit_line(seg)
        scale = math.sqrt(SLOPE_VARIANCE_SCALE / seg.size)
        out[i, 0] = np.digitize(mid, mean_bp)
        out[i, 1] = np.digitize(slope, slope_bp * scale)
    return out


def onedsax_inverse(symbols, cfg: SaxConfig, mean: float, std: float, length: int) -> TimeSeries:
    """Rebuild each segment as a line through the de-quantized midpoint with
    the de-quantized slope, then de-normalize."""
    if cfg.mean_alphabet is None or cfg.slope_alphabet is None:
        raise ValueError("mean_alphabet and slope_alphabet required for 1d-SAX")
    mean_cells = _cell_values(gaussian_breakpoints(cfg.mean_alphabet))
    slope_cells = _cell_values(gaussian_breakpoints(cfg.slope_alphabet))
    slices = _segment_slices(length, cfg.n_segments)
    out = np.empty(length)
    symbols = np.asarray(symbols, dtype=int)
    for (mean_cell, slope_cell), s in zip(symbols, slices):
        seg_len = s.stop - s.start
        scale = math.sqrt(SLOPE_VARIANCE_SCALE / seg_len)
        mid = mean_cells[mean_cell]
        slope = slope_cells[slope_cell] * scale
        t = np.arange(seg_len) - (seg_len - 1) / 2.0
        out[s] = mid + slope * t
    return TimeSeries(out * std + mean)


def _fit_line(seg: np.ndarray) -> tuple[float, float]:
    """Least-squares line over a segment; returns (value at center, slope).

    The fitted line passes through the segment centroid, so the center value
    equals the segment mean.
    """
    n = seg.size
    if n == 1:
        return float(seg[0]), 0.0
    t = np.arange(n) - (n - 1) / 2.0
    slope = float(np.dot(t, seg) / np.dot(t, t))
    return float(seg.mean()), slope


def split_symbol_budget(k: int) -> tuple[int, int]:
    """Split a total symbol budget into (mean_alphabet, slope_alphabet).

    Uses ceil(sqrt(k)) for the mean alphabet and ceil(k / mean) for the
    slope alphabet, so the product is at least k and both sizes are >= 2.
    """
    if k < 4:
        raise ValueError("budget must be at least 4")
    mean_alphabet = math.ceil(math.sqrt(k))
    slope_alphabet = math.ceil(k / mean_alphabet)
    return mean_alphabet, slope_alphabet
