"""Evaluation harness: tolerance escalation, same-budget method comparison,
parameter sweeps, and performance profiles, with CSV outputs."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .aggregation import aggregate
from .baselines import SaxConfig, kmeans_digitize, onedsax_inverse, onedsax_transform, sax_inverse, sax_transform, split_symbol_budget
from .compression import CompressionConfig, compress
from .core import Piece, ScalingMeta, SymbolicSeries, TimeSeries, as_series, scale_arrays, std_dev, znormalize
from .metrics import ReconstructionReport, dtw, euclid, mse
from .pipeline import FabbaModel, codebook_from_labels, fabba_inverse

__all__ = [
    "METHODS",
    "ProfileTable",
    "BenchRow",
    "ComparisonResult",
    "SweepRow",
    "escalate_tolerance",
    "performance_profile",
    "run_comparison",
    "parameter_sweep",
    "build_profile_table",
    "load_corpus",
    "make_demo_corpus",
    "write_reports_csv",
    "write_profiles_csv",
    "write_sweep_csv",
    "DEFAULT_THETAS",
]

METHODS = ("fABBA", "ABBA", "SAX", "1d-SAX")

REPORT_COLUMNS = (
    "series_id",
    "method",
    "n",
    "k",
    "tol",
    "alpha",
    "euclid",
    "dtw",
    "euclid_diff",
    "dtw_diff",
    "runtime_ms",
    "dist_count",
)

SWEEP_COLUMNS = ("alpha", "sorting", "tau_d", "euclid", "dtw", "runtime_ms", "dist", "k")

DEFAULT_THETAS = np.round(np.linspace(1.0, 5.0, 81), 6)


@dataclass(frozen=True)
class ProfileTable:
    """Solver-by-problem score matrix; smaller scores are better."""

    solvers: list[str]
    problems: list[str]
    scores: np.ndarray
    failures: set = field(default_factory=set)

    def __post_init__(self) -> None:
        scores = np.asarray(self.scores, dtype=float)
        if scores.shape != (len(self.solvers), len(self.problems)):
            raise ValueError("scores must be shaped (solvers, problems)")
        for i in range(scores.shape[0]):
            for j in range(scores.shape[1]):
                if (i, j) in self.failures:
                    continue
                if not np.isfinite(scores[i, j]) or scores[i, j] < 0:
                    raise ValueError("non-failure scores must be finite and >= 0")
        object.__setattr__(self, "scores", scores)


def performance_profile(table: ProfileTable, thetas=DEFAULT_THETAS) -> dict[str, np.ndarray]:
    """Fraction of problems on which each solver is within a factor theta of
    the per-problem best, for every theta in the grid.

    Failures never count as solved (their ratio is infinite).  A best score
    of zero gives ratio 1 to every solver that also scored zero and infinity
    to the rest.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size < 1 or np.any(thetas < 1):
        raise ValueError("theta grid must contain values >= 1")
    n_solvers = len(table.solvers)
    n_problems = len(table.problems)
    ratios = np.full((n_solvers, n_problems), np.inf)
    for j in range(n_problems):
        ok = [i for i in range(n_solvers) if (i, j) not in table.failures]
        if not ok:
            raise ValueError(f"problem {table.problems[j]!r} has no non-failing solver")
        best = min(table.scores[i, j] for i in ok)
        for i in ok:
            if best > 0:
                ratios[i, j] = table.scores[i, j] / best
            else:
                ratios[i, j] = 1.0 if table.scores[i, j] == 0 else np.inf
    return {
        solver: (ratios[i][None, :] < thetas[:, None]).mean(axis=1)
        for i, solver in enumerate(table.solvers)
    }


def escalate_tolerance(
    series,
    start: float = 0.05,
    step: float = 0.05,
    cap: float = 0.5,
    target_rate: float = 0.2,
) -> tuple[float, list[Piece]] | None:
    """Smallest tolerance on the grid that compresses to at most
    ``target_rate * N`` pieces, or None when even the cap is too tight."""
    series = as_series(series)
    n_steps = series.steps
    count = int(round((cap - start) / step)) + 1
    for i in range(count):
        tol = round(start + i * step, 10)
        if tol > cap + 1e-12:
            break
        pieces = compress(series, CompressionConfig(tol=tol))
        if len(pieces) / n_steps <= target_rate:
            return tol, pieces
    return None


@dataclass(frozen=True)
class BenchRow:
    series_id: str
    method: str
    tol: float
    alpha: float
    report: ReconstructionReport


@dataclass(frozen=True)
class ComparisonResult:
    rows: list[BenchRow]
    excluded: list[str]


def _series_id(ts: TimeSeries, index: int) -> str:
    return ts.name if ts.name else f"series{index:03d}"


def run_comparison(
    corpus: Sequence[TimeSeries],
    alpha: float,
    scl: float = 1.0,
    sorting: str = "norm_2",
    seed: int = 0,
    normalize: bool = True,
) -> ComparisonResult:
    """Score all four methods per series with a shared piece count and symbol budget.

    Each series is (optionally) z-normalized, compressed via tolerance
    escalation, then digitized: the aggregation pipeline fixes the symbol
    budget k, k-means++ digitization reuses the same pieces at exactly that
    k, and SAX / 1d-SAX run with the piece count as their segment count and
    k as their alphabet budget.  Series that fail escalation are excluded.
    Runtimes cover digitization only.
    """
    if len(corpus) == 0:
        raise ValueError("corpus must not be empty")
    rows: list[BenchRow] = []
    excluded: list[str] = []
    named = sorted(
        (( _series_id(ts, i), ts) for i, ts in enumerate(corpus)), key=lambda p: p[0]
    )
    for sid, ts in named:
        work = znormalize(ts.values)[0] if normalize else np.asarray(ts.values, dtype=float)
        esc = escalate_tolerance(work)
        if esc is None:
            excluded.append(sid)
            continue
        tol, pieces = esc
        n = len(pieces)
        n_steps = work.size - 1
        lens = np.array([p.len for p in pieces], dtype=float)
        incs = np.array([p.inc for p in pieces], dtype=float)
        xs, ys, sigma_len, sigma_inc = scale_arrays(lens, incs, scl)
        scaling = ScalingMeta(
            sigma_len=sigma_len, sigma_inc=sigma_inc, scl=scl, start_value=float(work[0])
        )
        w_mean = float(work.mean())
        w_std = std_dev(work)

        t0 = time.perf_counter()
        agg = aggregate(np.column_stack((xs, ys)), alpha, sorting)
        codebook = codebook_from_labels(lens, incs, agg.labels)
        fabba_ms = (time.perf_counter() - t0) * 1000.0
        budget = agg.k
        model = FabbaModel(
            symbolic=SymbolicSeries(agg.labels, codebook, scaling),
            pieces_count=n,
            dist_count=agg.dist_count,
            series_len=n_steps,
        )
        recon_fabba = fabba_inverse(model).values

        t0 = time.perf_counter()
        ab_labels, _, _ = kmeans_digitize(pieces, budget, scl=scl, seed=seed)
        ab_codebook = codebook_from_labels(lens, incs, ab_labels)
        abba_ms = (time.perf_counter() - t0) * 1000.0
        ab_model = FabbaModel(
            symbolic=SymbolicSeries(ab_labels, ab_codebook, scaling),
            pieces_count=n,
            dist_count=0,
            series_len=n_steps,
        )
        recon_abba = fabba_inverse(ab_model).values

        sax_cfg = SaxConfig(n_segments=n, alphabet_size=max(2, budget))
        t0 = time.perf_counter()
        sax_syms = sax_transform(work, sax_cfg)
        sax_ms = (time.perf_counter() - t0) * 1000.0
        recon_sax = sax_inverse(sax_syms, sax_cfg, w_mean, w_std, work.size).values

        mean_a, slope_a = split_symbol_budget(max(4, budget))
        one_cfg = SaxConfig(n_segments=n, mean_alphabet=mean_a, slope_alphabet=slope_a)
        t0 = time.perf_counter()
        one_syms = onedsax_transform(work, one_cfg)
        one_ms = (time.perf_counter() - t0) * 1000.0
        recon_one = onedsax_inverse(one_syms, one_cfg, w_mean, w_std, work.size).values

        diff_work = np.diff(work)
        outputs = (
            ("fABBA", recon_fabba, fabba_ms, agg.dist_count),
            ("ABBA", recon_abba, abba_ms, 0),
            ("SAX", recon_sax, sax_ms, 0),
            ("1d-SAX", recon_one, one_ms, 0),
        )
        for method, recon, runtime_ms, dist_count in outputs:
            report = ReconstructionReport(
                euclid=euclid(work, recon),
                mse=mse(work, recon),
                dtw=dtw(work, recon),
                euclid_diff=euclid(diff_work, np.diff(recon)),
                dtw_diff=dtw(diff_work, np.diff(recon)),
                tau_c=n / n_steps,
                tau_d=budget / n,
                k=budget,
                n=n,
                runtime_ms=runtime_ms,
                dist_count=dist_count,
            )
            rows.append(BenchRow(series_id=sid, method=method, tol=tol, alpha=alpha, report=report))
    return ComparisonResult(rows=rows, excluded=excluded)


@dataclass(frozen=True)
class SweepRow:
    """Means over all non-excluded series for one (alpha, sorting) setting."""

    alpha: float
    sorting: str
    tau_d: float
    euclid: float
    dtw: float
    runtime_ms: float
    dist: float
    k: float


def parameter_sweep(
    corpus: Sequence[TimeSeries],
    alphas: Sequence[float],
    sortings: Sequence[str],
    scl: float = 1.0,
    normalize: bool = True,
) -> list[SweepRow]:
    """Aggregation-pipeline averages per (alpha, sorting) over the corpus."""
    if len(corpus) == 0:
        raise ValueError("corpus must not be empty")
    named = sorted(((_series_id(ts, i), ts) for i, ts in enumerate(corpus)), key=lambda p: p[0])
    prepared = []
    for _, ts in named:
        work = znormalize(ts.values)[0] if normalize else np.asarray(ts.values, dtype=float)
        esc = escalate_tolerance(work)
        if esc is None:
            continue
        _, pieces = esc
        lens = np.array([p.len for p in pieces], dtype=float)
        incs = np.array([p.inc for p in pieces], dtype=float)
        xs, ys, sigma_len, sigma_inc = scale_arrays(lens, incs, scl)
        scaling = ScalingMeta(
            sigma_len=sigma_len, sigma_inc=sigma_inc, scl=scl, start_value=float(work[0])
        )
        prepared.append((work, lens, incs, np.column_stack((xs, ys)), scaling))
    if not prepared:
        raise ValueError("every corpus series was excluded by tolerance escalation")

    out: list[SweepRow] = []
    for sorting in sortings:
        for alpha in alphas:
            tau_d = []
            errs = []
            dtws = []
            times = []
            dists = []
            ks = []
            for work, lens, incs, pts, scaling in prepared:
                t0 = time.perf_counter()
                agg = aggregate(pts, alpha, sorting)
                codebook = codebook_from_labels(lens, incs, agg.labels)
                times.append((time.perf_counter() - t0) * 1000.0)
                n = pts.shape[0]
                model = FabbaModel(
                    symbolic=SymbolicSeries(agg.labels, codebook, scaling),
                    pieces_count=n,
                    dist_count=agg.dist_count,
                    series_len=work.size - 1,
                )
                recon = fabba_inverse(model).values
                tau_d.append(agg.k / n)
                errs.append(euclid(work, recon))
                dtws.append(dtw(work, recon))
                dists.append(agg.dist_count)
                ks.append(agg.k)
            out.append(
                SweepRow(
                    alpha=float(alpha),
                    sorting=sorting,
                    tau_d=float(np.mean(tau_d)),
                    euclid=float(np.mean(errs)),
                    dtw=float(np.mean(dtws)),
                    runtime_ms=float(np.mean(times)),
                    dist=float(np.mean(dists)),
                    k=float(np.mean(ks)),
                )
            )
    return out


def build_profile_table(result: ComparisonResult, metric: str = "dtw") -> ProfileTable:
    """Arrange comparison scores for one metric into a profile table."""
    problems = sorted({row.series_id for row in result.rows})
    index = {sid: j for j, sid in enumerate(problems)}
    scores = np.full((len(METHODS), len(problems)), np.nan)
    for row in result.rows:
        i = METHODS.index(row.method)
        scores[i, index[row.series_id]] = getattr(row.report, metric)
    if np.any(np.isnan(scores)):
        raise ValueError("comparison result is missing method rows")
    return ProfileTable(solvers=list(METHODS), problems=problems, scores=scores)


# ---------------------------------------------------------------------------
# Corpus I/O
# ---------------------------------------------------------------------------


def _parse_float_fields(fields: list[str]) -> np.ndarray:
    # UCR exports pad ragged rows with trailing NaNs; strip those.
    vals = [float(f) for f in fields if f.strip() != ""]
    while vals and not np.isfinite(vals[-1]):
        vals.pop()
    return np.asarray(vals, dtype=float)


def load_corpus(path) -> list[TimeSeries]:
    """Read every .csv (one series per row) and .tsv (label first) file in a
    directory into a list of named series."""
    root = Path(path)
    if not root.is_dir():
        raise ValueError(f"corpus directory not found: {root}")
    series: list[TimeSeries] = []
    for file in sorted(root.iterdir()):
        if file.suffix.lower() == ".csv":
            sep, labelled = ",", False
        elif file.suffix.lower() == ".tsv":
            sep, labelled = "\t", True
        else:
            continue
        with open(file, "r", encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                fields = line.split(sep)
                label = None
                if labelled:
                    label = fields[0].strip()
                    fields = fields[1:]
                values = _parse_float_fields(fields)
                if values.size == 0:
                    continue
                series.append(TimeSeries(values, name=f"{file.stem}#{i:03d}", label=label))
    if not series:
        raise ValueError(f"no series found in corpus: {root}")
    return series


def make_demo_corpus(out_dir, n_series: int = 20, seed: int = 0, length: int = 500) -> list[Path]:
    """Write a deterministic synthetic corpus of smooth, compressible series.

    Half the series are sine mixtures with linear trends, half are smoothed
    random walks; one series per CSV row, split across two files.
    """
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t = np.arange(length) / length

    def sine_series() -> np.ndarray:
        f1 = rng.uniform(1.0, 4.0)
        f2 = rng.uniform(4.0, 9.0)
        a2 = rng.uniform(0.1, 0.5)
        trend = rng.uniform(-2.0, 2.0)
        phase = rng.uniform(0, 2 * np.pi)
        return np.sin(2 * np.pi * f1 * t + phase) + a2 * np.sin(2 * np.pi * f2 * t) + trend * t

    def walk_series() -> np.ndarray:
        steps = rng.standard_normal(length + 40)
        walk = np.cumsum(steps)
        window = np.ones(31) / 31.0
        sm = np.convolve(walk, window, mode="valid")
        return sm[:length]

    n_sines = n_series - n_series // 2
    paths = []
    for fname, maker, count in (
        ("sines.csv", sine_series, n_sines),
        ("walks.csv", walk_series, n_series // 2),
    ):
        if count == 0:
            continue
        fpath = out / fname
        with open(fpath, "w", encoding="utf-8") as fh:
            for _ in range(count):
                vals = maker()
                fh.write(",".join(repr(float(v)) for v in vals) + "\n")
        paths.append(fpath)
    return paths


# ---------------------------------------------------------------------------
# CSV writers
# ---------------------------------------------------------------------------


def write_reports_csv(result: ComparisonResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for row in result.rows:
            rep = row.report
            writer.writerow(
                [
                    row.series_id,
                    row.method,
                    rep.n,
                    rep.k,
                    row.tol,
                    row.alpha,
                    rep.euclid,
                    rep.dtw,
                    rep.euclid_diff,
                    rep.dtw_diff,
                    rep.runtime_ms,
                    rep.dist_count,
                ]
            )


def write_profiles_csv(profiles: dict[str, np.ndarray], thetas, path) -> None:
    thetas = np.asarray(thetas, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("theta", "solver", "rho"))
        for solver, rho in profiles.items():
            for theta, value in zip(thetas, rho):
                writer.writerow([theta, solver, value])


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(
                [row.alpha, row.sorting, row.tau_d, row.euclid, row.dtw, row.runtime_ms, row.dist, row.k]
            )
