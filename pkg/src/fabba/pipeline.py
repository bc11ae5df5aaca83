"""End-to-end symbolic transform and its inverse.

Forward: compress into pieces, scale, aggregate into groups, emit one symbol
per piece.  Inverse: look up each symbol's unscaled group mean, quantize the
fractional lengths back to integers summing to the original step count, and
rebuild the polygonal chain from the stored start value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .aggregation import SORT_STRATEGIES, aggregate
from .compression import CompressionConfig, compress, inverse_compress
from .core import (
    Codebook,
    Piece,
    ScalingMeta,
    SymbolicSeries,
    TimeSeries,
    as_series,
    scale_arrays,
    symbol_name,
    znormalize,
)

__all__ = [
    "FabbaConfig",
    "FabbaModel",
    "fabba_transform",
    "inverse_digitize",
    "quantize_lengths",
    "fabba_inverse",
    "codebook_from_labels",
    "display_symbols",
    "model_to_json",
    "model_from_json",
    "save_model",
    "load_model",
]


@dataclass(frozen=True)
class FabbaConfig:
    tol: float = 0.1
    alpha: float = 0.5
    scl: float = 1.0
    sorting: str = "norm_2"
    normalize: bool = False

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.scl < 0:
            raise ValueError("scl must be >= 0")
        if self.sorting not in SORT_STRATEGIES:
            raise ValueError(f"unknown sort strategy {self.sorting!r}")


@dataclass(frozen=True)
class FabbaModel:
    """Transform output: the symbolic series plus bookkeeping for rates."""

    symbolic: SymbolicSeries
    pieces_count: int
    dist_count: int
    series_len: int

    def __post_init__(self) -> None:
        if self.pieces_count != len(self.symbolic):
            raise ValueError("pieces_count must equal the symbol count")

    @property
    def k(self) -> int:
        return len(self.symbolic.codebook)


def codebook_from_labels(lens: np.ndarray, incs: np.ndarray, labels: np.ndarray) -> Codebook:
    """Unscaled per-group means of the raw (len, inc) tuples."""
    labels = np.asarray(labels, dtype=int)
    k = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=k)
    if np.any(sizes == 0):
        raise ValueError("labels must use every group id")
    mean_len = np.bincount(labels, weights=lens, minlength=k) / sizes
    mean_inc = np.bincount(labels, weights=incs, minlength=k) / sizes
    return Codebook({g: (float(mean_len[g]), float(mean_inc[g])) for g in range(k)})


def fabba_transform(series, cfg: FabbaConfig) -> FabbaModel:
    """Compress, scale, aggregate, and symbolize a series."""
    series = as_series(series)
    if cfg.normalize:
        work, mean, std = znormalize(series.values)
    else:
        work, mean, std = series.values, 0.0, 1.0

    pieces = compress(work, CompressionConfig(tol=cfg.tol))
    lens = np.array([p.len for p in pieces], dtype=float)
    incs = np.array([p.inc for p in pieces], dtype=float)
    xs, ys, sigma_len, sigma_inc = scale_arrays(lens, incs, cfg.scl)

    agg = aggregate(np.column_stack((xs, ys)), cfg.alpha, cfg.sorting)
    codebook = codebook_from_labels(lens, incs, agg.labels)
    scaling = ScalingMeta(
        sigma_len=sigma_len,
        sigma_inc=sigma_inc,
        scl=cfg.scl,
        start_value=float(work[0]),
        normalize=cfg.normalize,
        mean=mean,
        std=std,
    )
    symbolic = SymbolicSeries(symbols=agg.labels, codebook=codebook, scaling=scaling)
    return FabbaModel(
        symbolic=symbolic,
        pieces_count=len(pieces),
        dist_count=agg.dist_count,
        series_len=series.steps,
    )


def inverse_digitize(symbolic: SymbolicSeries) -> list[tuple[float, float]]:
    """Replace each symbol by its group's unscaled mean (len, inc) tuple."""
    out = []
    for s in symbolic.symbols:
        s = int(s)
        if s not in symbolic.codebook:
            raise ValueError(f"unknown symbol {s}")
        out.append(symbolic.codebook[s])
    return out


def quantize_lengths(tuples: Sequence[tuple[float, float]], target_total: int) -> list[Piece]:
    """Round fractional lengths to integers >= 1 that sum to ``target_total``.

    Rounding errors are carried forward so the running total tracks the real
    lengths; any residue left after the loop lands on the last piece.
    """
    tuples = list(tuples)
    if len(tuples) > target_total:
        raise ValueError("cannot quantize")
    for real_len, _ in tuples:
        if not real_len > 0:
            raise ValueError("cannot quantize")
    lengths = []
    carry = 0.0
    for real_len, _ in tuples:
        q = int(round(real_len + carry))
        if q < 1:
            q = 1
        carry += real_len - q
        lengths.append(q)
    lengths[-1] = max(1, lengths[-1] + (target_total - sum(lengths)))
    return [Piece(q, inc) for q, (_, inc) in zip(lengths, tuples)]


def fabba_inverse(model: FabbaModel) -> TimeSeries:
    """Reconstruct a series of exactly ``series_len + 1`` values from a model."""
    tuples = inverse_digitize(model.symbolic)
    pieces = quantize_lengths(tuples, model.series_len)
    recon = inverse_compress(model.symbolic.scaling.start_value, pieces)
    scaling = model.symbolic.scaling
    if scaling.normalize:
        return TimeSeries(recon.values * scaling.std + scaling.mean)
    return recon


def display_symbols(symbolic: SymbolicSeries) -> str:
    """Render the symbol sequence with the most frequent group shown as 'a'.

    Groups are relabelled by descending size (ties keep formation order)
    purely for display; internal ids are untouched.
    """
    counts = np.bincount(symbolic.symbols, minlength=len(symbolic.codebook))
    order = np.argsort(-counts, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return "".join(symbol_name(int(rank[s])) for s in symbolic.symbols)


def model_to_json(model: FabbaModel) -> str:
    """Serialize a model to the canonical JSON document."""
    scaling = model.symbolic.scaling
    doc = {
        "symbols": [int(s) for s in model.symbolic.symbols],
        "codebook": {
            str(sym): [float(c_len), float(c_inc)]
            for sym, (c_len, c_inc) in model.symbolic.codebook.items()
        },
        "scaling": {
            "sigma_len": float(scaling.sigma_len),
            "sigma_inc": float(scaling.sigma_inc),
            "scl": float(scaling.scl),
            "start_value": float(scaling.start_value),
            "normalize": bool(scaling.normalize),
            "mean": float(scaling.mean),
            "std": float(scaling.std),
        },
        "series_len": int(model.series_len),
    }
    return json.dumps(doc)


def model_from_json(text: str) -> FabbaModel:
    """Parse the canonical JSON document back into a model.

    The distance-evaluation counter is not part of the document and loads
    back as 0.
    """
    doc = json.loads(text)
    try:
        symbols = np.asarray(doc["symbols"], dtype=int)
        codebook = Codebook({int(k): (v[0], v[1]) for k, v in doc["codebook"].items()})
        s = doc["scaling"]
        scaling = ScalingMeta(
            sigma_len=float(s["sigma_len"]),
            sigma_inc=float(s["sigma_inc"]),
            scl=float(s["scl"]),
            start_value=float(s["start_value"]),
            normalize=bool(s["normalize"]),
            mean=float(s["mean"]),
            std=float(s["std"]),
        )
        series_len = int(doc["series_len"])
    except (KeyError, IndexError, TypeError) as exc:
        raise ValueError(f"malformed model document: {exc}") from exc
    symbolic = SymbolicSeries(symbols=symbols, codebook=codebook, scaling=scaling)
    return FabbaModel(
        symbolic=symbolic,
        pieces_count=len(symbolic),
        dist_count=0,
        series_len=series_len,
    )


def save_model(model: FabbaModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> FabbaModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(fh.read())
