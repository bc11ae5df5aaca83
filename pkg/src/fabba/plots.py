"""Figure rendering for the benchmark outputs.

Figures are written straight to files (Agg backend); the CSV outputs remain
the canonical data, these are the quick-look companions.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_profiles_figure", "save_sweep_figure"]

_METRIC_TITLES = {
    "euclid": "Euclidean distance",
    "dtw": "DTW distance",
    "euclid_diff": "Euclidean distance (differenced)",
    "dtw_diff": "DTW distance (differenced)",
}


def save_profiles_figure(profiles_by_metric: dict, thetas, path) -> None:
    """Grid of performance-profile curves, one panel per metric.

    ``profiles_by_metric`` maps a metric name to a {solver: rho array} dict
    evaluated on ``thetas``.
    """
    thetas = np.asarray(thetas, dtype=float)
    metrics = list(profiles_by_metric)
    ncols = 2 if len(metrics) > 1 else 1
    nrows = (len(metrics) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.2 * ncols, 3.6 * nrows), squeeze=False)
    for ax in axes.ravel()[len(metrics):]:
        ax.set_visible(False)
    for ax, metric in zip(axes.ravel(), metrics):
        for solver, rho in profiles_by_metric[metric].items():
            ax.plot(thetas, rho, label=solver)
        ax.set_title(_METRIC_TITLES.get(metric, metric))
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel(r"$\rho(\theta)$")
        ax.set_ylim(-0.02, 1.02)
        ax.grid(True, alpha=0.3)
    axes.ravel()[0].legend(loc="lower right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(rows, path) -> None:
    """Mean symbol count and mean DTW error against alpha, one line per sorting."""
    sortings = sorted({row.sorting for row in rows})
    fig, (ax_k, ax_err) = plt.subplots(1, 2, figsize=(10.4, 3.8))
    for sorting in sortings:
        sub = sorted((r for r in rows if r.sorting == sorting), key=lambda r: r.alpha)
        alphas = [r.alpha for r in sub]
        ax_k.plot(alphas, [r.k for r in sub], marker="o", label=sorting)
        ax_err.plot(alphas, [r.dtw for r in sub], marker="o", label=sorting)
    ax_k.set_xlabel(r"$\alpha$")
    ax_k.set_ylabel("mean symbols k")
    ax_err.set_xlabel(r"$\alpha$")
    ax_err.set_ylabel("mean DTW error")
    for ax in (ax_k, ax_err):
        ax.grid(True, alpha=0.3)
    ax_k.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
