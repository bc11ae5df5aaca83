"""Command-line entry points.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors (unreadable or
malformed inputs).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import plots
from .core import TimeSeries
from .image import flatten_image, read_ppm, unflatten_image, write_ppm
from .metrics import rates
from .pipeline import FabbaConfig, fabba_inverse, fabba_transform, load_model, save_model

__all__ = ["cli_dispatch", "main"]


class UsageError(Exception):
    def __init__(self, usage: str, message: str):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.format_usage(), message)


def _read_series_csv(path) -> TimeSeries:
    """First non-empty row of a one-series-per-row CSV file."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                return TimeSeries(np.array([float(f) for f in line.split(",")]))
    raise ValueError(f"no series found in {path}")


def _write_series_csv(series: TimeSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(repr(float(v)) for v in series.values) + "\n")


def _add_transform_flags(p: argparse.ArgumentParser, alpha_default: float) -> None:
    p.add_argument("--tol", type=float, default=0.1, help="compression tolerance")
    p.add_argument("--alpha", type=float, default=alpha_default, help="aggregation radius")
    p.add_argument("--scl", type=float, default=1.0, help="length-axis weight")
    p.add_argument(
        "--sorting",
        choices=("lexicographic_binned", "norm_1", "norm_2"),
        default="norm_2",
        help="scan order for aggregation",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fabba", description="Symbolic time-series compression toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("compress", help="transform a series into a symbolic model")
    p.add_argument("input", help="CSV file, one series per row (first row used)")
    _add_transform_flags(p, alpha_default=0.5)
    p.add_argument("--normalize", action="store_true", help="z-normalize before compressing")
    p.add_argument("--out", default="model.json", help="model output path")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("reconstruct", help="rebuild a series from a symbolic model")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--out", default="series.csv", help="series output path")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("image", help="lossy round trip of a PPM image")
    p.add_argument("input", help="binary PPM (P6) file")
    _add_transform_flags(p, alpha_default=0.001)
    p.add_argument("--no-normalize", action="store_true", help="work in raw pixel units")
    p.add_argument("--out", default="recon.ppm", help="reconstructed image path")
    p.add_argument("--report", default="report.json", help="compression report path")
    p.set_defaults(func=_cmd_image)

    p = sub.add_parser("bench", help="same-budget comparison of fABBA/ABBA/SAX/1d-SAX")
    p.add_argument("corpus", help="directory of .csv/.tsv series files")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--scl", type=float, default=1.0)
    p.add_argument(
        "--sorting",
        choices=("lexicographic_binned", "norm_1", "norm_2"),
        default="norm_2",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    p.add_argument("--out-dir", default="bench_out", help="output directory")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("sweep", help="average fABBA behaviour over an alpha grid")
    p.add_argument("corpus", help="directory of .csv/.tsv series files")
    p.add_argument("--alphas", default="0.1..0.9", help="comma list or lo..hi[:step] range")
    p.add_argument(
        "--sortings",
        default="norm_2",
        help="comma list of sortings, or 'all'",
    )
    p.add_argument("--scl", type=float, default=1.0)
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    p.add_argument("--out", default="sweep.csv", help="sweep table output path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("make-corpus", help="write the bundled synthetic demo corpus")
    p.add_argument("out_dir")
    p.add_argument("--n", type=int, default=20, help="number of series")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=500)
    p.set_defaults(func=_cmd_make_corpus)

    return parser


def _cmd_compress(args) -> int:
    series = _read_series_csv(args.input)
    cfg = FabbaConfig(
        tol=args.tol, alpha=args.alpha, scl=args.scl, sorting=args.sorting, normalize=args.normalize
    )
    model = fabba_transform(series, cfg)
    save_model(model, args.out)
    print(f"wrote {args.out}: {model.pieces_count} pieces, {model.k} symbols")
    return 0


def _cmd_reconstruct(args) -> int:
    model = load_model(args.model)
    series = fabba_inverse(model)
    _write_series_csv(series, args.out)
    print(f"wrote {args.out}: {len(series)} values")
    return 0


def _cmd_image(args) -> int:
    img = read_ppm(args.input)
    series = flatten_image(img)
    normalize = not args.no_normalize
    cfg = FabbaConfig(
        tol=args.tol, alpha=args.alpha, scl=args.scl, sorting=args.sorting, normalize=normalize
    )
    model = fabba_transform(series, cfg)
    recon = fabba_inverse(model)
    out_img = unflatten_image(recon, img.width, img.height)
    write_ppm(out_img, args.out)
    tau_c, tau_d = rates(model.pieces_count, model.series_len, model.k)
    report = {
        "input": str(args.input),
        "width": img.width,
        "height": img.height,
        "tol": args.tol,
        "alpha": args.alpha,
        "scl": args.scl,
        "normalized": normalize,
        "series_len": model.series_len,
        "n": model.pieces_count,
        "k": model.k,
        "tau_c": tau_c,
        "tau_d": tau_d,
    }
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.out} and {args.report}: tau_c={tau_c:.4f} tau_d={tau_d:.4f}")
    return 0


def _cmd_bench(args) -> int:
    corpus = bench_mod.load_corpus(args.corpus)
    result = bench_mod.run_comparison(
        corpus,
        alpha=args.alpha,
        scl=args.scl,
        sorting=args.sorting,
        seed=args.seed,
        normalize=not args.no_normalize,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bench_mod.write_reports_csv(result, out_dir / "reports.csv")
    thetas = bench_mod.DEFAULT_THETAS
    profiles = bench_mod.performance_profile(bench_mod.build_profile_table(result, "dtw"), thetas)
    bench_mod.write_profiles_csv(profiles, thetas, out_dir / "profiles.csv")
    if not args.no_plots:
        by_metric = {
            metric: bench_mod.performance_profile(
                bench_mod.build_profile_table(result, metric), thetas
            )
            for metric in ("euclid", "dtw", "euclid_diff", "dtw_diff")
        }
        plots.save_profiles_figure(by_metric, thetas, out_dir / "profiles.png")
    kept = len({row.series_id for row in result.rows})
    print(
        f"wrote {out_dir}/reports.csv ({len(result.rows)} rows), profiles.csv; "
        f"{kept} series kept, {len(result.excluded)} excluded"
    )
    return 0


def _parse_alphas(expr: str) -> list[float]:
    if ".." in expr:
        lo_part, hi_part = expr.split("..", 1)
        step = 0.1
        if ":" in hi_part:
            hi_part, step_part = hi_part.split(":", 1)
            step = float(step_part)
        lo, hi = float(lo_part), float(hi_part)
        if step <= 0 or hi < lo:
            raise ValueError(f"bad alpha range: {expr}")
        count = int(round((hi - lo) / step)) + 1
        return [round(lo + i * step, 10) for i in range(count)]
    return [float(x) for x in expr.split(",")]


def _parse_sortings(expr: str) -> list[str]:
    if expr == "all":
        return ["lexicographic_binned", "norm_1", "norm_2"]
    out = [s.strip() for s in expr.split(",") if s.strip()]
    for s in out:
        if s not in ("lexicographic_binned", "norm_1", "norm_2"):
            raise ValueError(f"unknown sorting: {s}")
    return out


def _cmd_sweep(args) -> int:
    corpus = bench_mod.load_corpus(args.corpus)
    alphas = _parse_alphas(args.alphas)
    sortings = _parse_sortings(args.sortings)
    rows = bench_mod.parameter_sweep(
        corpus, alphas, sortings, scl=args.scl, normalize=not args.no_normalize
    )
    bench_mod.write_sweep_csv(rows, args.out)
    if not args.no_plots:
        fig_path = Path(args.out).with_suffix(".png")
        plots.save_sweep_figure(rows, fig_path)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_make_corpus(args) -> int:
    paths = bench_mod.make_demo_corpus(args.out_dir, n_series=args.n, seed=args.seed, length=args.length)
    print(f"wrote {len(paths)} corpus files to {args.out_dir}")
    return 0


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(exc.usage)
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
