"""Independent oracles shared by the module and acceptance tests.

Everything here recomputes results from first principles (brute force,
enumeration, bisection) and stays independent of the library code paths it
checks.
"""

from __future__ import annotations

import math

import numpy as np

from fabba.aggregation import sort_points


def naive_aggregate_labels(points, alpha: float, strategy: str) -> np.ndarray:
    """Scan-order grouping without any early stopping: every later unassigned
    point within alpha of the current starting point joins its group."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    perm = sort_points(pts, strategy)
    s = pts[perm]
    labels_sorted = np.full(n, -1, dtype=int)
    gid = 0
    for i in range(n):
        if labels_sorted[i] >= 0:
            continue
        labels_sorted[i] = gid
        if i + 1 < n:
            d2 = ((s[i + 1 :] - s[i]) ** 2).sum(axis=1)
            mask = (labels_sorted[i + 1 :] < 0) & (d2 <= alpha * alpha)
            labels_sorted[i + 1 :][mask] = gid
        gid += 1
    labels = np.empty(n, dtype=int)
    labels[perm] = labels_sorted
    return labels


def direct_piece_residual(values, start: int, end: int) -> float:
    """Literal endpoint-line residual sum over one piece."""
    values = np.asarray(values, dtype=float)
    total = 0.0
    length = end - start
    for i in range(start, end + 1):
        line = values[start] + (values[end] - values[start]) * (i - start) / length
        total += (line - values[i]) ** 2
    return total


def exhaustive_dtw(a, b) -> float:
    """Minimum alignment cost over every monotone path, by enumeration."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = len(a), len(b)
    best = math.inf

    def walk(i, j, acc):
        nonlocal best
        acc = acc + (a[i] - b[j]) ** 2
        if acc > best:
            return
        if i == n - 1 and j == m - 1:
            best = min(best, acc)
            return
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return math.sqrt(best)


def pair_counting_ari(labels_a, labels_b) -> float:
    """Adjusted Rand index recomputed from raw item pairs."""
    la = list(labels_a)
    lb = list(labels_b)
    n = len(la)
    together_both = 0
    together_a = 0
    together_b = 0
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += 1
            same_a = la[i] == la[j]
            same_b = lb[i] == lb[j]
            together_a += same_a
            together_b += same_b
            together_both += same_a and same_b
    expected = together_a * together_b / total
    max_index = (together_a + together_b) / 2
    if max_index == expected:
        return 1.0
    return (together_both - expected) / (max_index - expected)


def invnorm_bisect(p: float) -> float:
    """Standard normal quantile by bisection on math.erf."""
    lo, hi = -10.0, 10.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if (1.0 + math.erf(mid / math.sqrt(2.0))) / 2.0 < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def random_walk(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return np.cumsum(rng.standard_normal(n)) * scale


def uniform_disk(rng: np.random.Generator, center, radius: float, count: int) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    theta = rng.uniform(0, 2 * np.pi, count)
    return np.asarray(center) + np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def separated_centers(rng: np.random.Generator, count: int, span: float, min_gap: float) -> np.ndarray:
    while True:
        centers = rng.uniform(0, span, size=(count, 2))
        d = np.sqrt(((centers[:, None, :] - centers[None, :, :]) ** 2).sum(-1))
        np.fill_diagonal(d, np.inf)
        if d.min() > min_gap:
            return centers
