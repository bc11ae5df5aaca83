import csv
import json

import numpy as np
import pytest

from fabba.cli import cli_dispatch
from fabba.image import ImageTensor, read_ppm, write_ppm


def write_series_csv(path, values):
    path.write_text(",".join(repr(float(v)) for v in values) + "\n")


def gradient_image(width=40, height=30):
    x = np.linspace(0, 255, width)
    y = np.linspace(0, 255, height)
    r = np.tile(x, (height, 1))
    g = np.tile(y[:, None], (1, width))
    b = (r + g) / 2
    pixels = np.stack((r, g, b), axis=-1).round().astype(np.uint8)
    return ImageTensor(width=width, height=height, pixels=pixels)


class TestCompressReconstruct:
    def test_ramp_round_trip(self, tmp_path, capsys):
        src = tmp_path / "ramp.csv"
        write_series_csv(src, np.linspace(0, 5, 60))
        model_path = tmp_path / "model.json"
        code = cli_dispatch(
            ["compress", str(src), "--tol", "0.1", "--alpha", "0.5", "--out", str(model_path)]
        )
        assert code == 0
        doc = json.loads(model_path.read_text())
        assert len(doc["codebook"]) == 1  # a ramp is one piece, one symbol
        out = tmp_path / "recon.csv"
        code = cli_dispatch(["reconstruct", str(model_path), "--out", str(out)])
        assert code == 0
        values = [float(v) for v in out.read_text().strip().split(",")]
        assert np.allclose(values, np.linspace(0, 5, 60))

    def test_missing_input_is_data_error(self, tmp_path):
        assert cli_dispatch(["compress", str(tmp_path / "none.csv")]) == 2

    def test_bad_model_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert cli_dispatch(["reconstruct", str(bad)]) == 2


class TestUsageErrors:
    def test_unknown_flag(self, capsys):
        assert cli_dispatch(["compress", "x.csv", "--frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_no_subcommand(self, capsys):
        assert cli_dispatch([]) == 1

    def test_unknown_subcommand(self):
        assert cli_dispatch(["explode"]) == 1

    def test_help_exits_zero(self):
        assert cli_dispatch(["--help"]) == 0


class TestImageCommand:
    def test_gradient_round_trip(self, tmp_path):
        src = tmp_path / "grad.ppm"
        write_ppm(gradient_image(), src)
        out = tmp_path / "recon.ppm"
        report = tmp_path / "report.json"
        code = cli_dispatch(
            [
                "image", str(src),
                "--tol", "0.1", "--alpha", "0.001",
                "--out", str(out), "--report", str(report),
            ]
        )
        assert code == 0
        doc = json.loads(report.read_text())
        assert 0 < doc["tau_c"] <= 1
        assert 0 < doc["tau_d"] <= 1
        original = read_ppm(src)
        recon = read_ppm(out)
        mae = float(np.mean(np.abs(recon.pixels.astype(float) - original.pixels.astype(float))))
        assert mae < 10

    def test_malformed_ppm_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.ppm"
        bad.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
        assert cli_dispatch(["image", str(bad)]) == 2


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_corpus")
    assert cli_dispatch(["make-corpus", str(root), "--n", "6", "--seed", "0"]) == 0
    return root


class TestBenchAndSweep:
    def test_bench_outputs(self, corpus_dir, tmp_path):
        out_dir = tmp_path / "bench"
        code = cli_dispatch(["bench", str(corpus_dir), "--alpha", "0.5", "--out-dir", str(out_dir)])
        assert code == 0
        with open(out_dir / "reports.csv") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 1 + 6 * 4
        with open(out_dir / "profiles.csv") as fh:
            prows = list(csv.reader(fh))
        assert prows[0] == ["theta", "solver", "rho"]
        assert (out_dir / "profiles.png").exists()

    def test_bench_deterministic(self, corpus_dir, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert (
                cli_dispatch(
                    ["bench", str(corpus_dir), "--out-dir", str(out), "--seed", "3", "--no-plots"]
                )
                == 0
            )
        # profiles carry only scores and are fully reproducible
        assert (a / "profiles.csv").read_bytes() == (b / "profiles.csv").read_bytes()
        # reports are reproducible in every column except the measured runtime
        with open(a / "reports.csv") as fh:
            rows_a = list(csv.reader(fh))
        with open(b / "reports.csv") as fh:
            rows_b = list(csv.reader(fh))
        runtime_col = rows_a[0].index("runtime_ms")
        for ra, rb in zip(rows_a, rows_b):
            del ra[runtime_col], rb[runtime_col]
        assert rows_a == rows_b

    def test_sweep_outputs(self, corpus_dir, tmp_path):
        out = tmp_path / "sweep.csv"
        code = cli_dispatch(["sweep", str(corpus_dir), "--alphas", "0.2,0.6", "--out", str(out)])
        assert code == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "alpha"
        assert len(rows) == 1 + 2
        assert out.with_suffix(".png").exists()

    def test_sweep_range_syntax(self, corpus_dir, tmp_path):
        out = tmp_path / "sweep_range.csv"
        code = cli_dispatch(
            ["sweep", str(corpus_dir), "--alphas", "0.1..0.5:0.2", "--out", str(out), "--no-plots"]
        )
        assert code == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert [r[0] for r in rows[1:]] == ["0.1", "0.3", "0.5"]

    def test_missing_corpus_is_data_error(self, tmp_path):
        assert cli_dispatch(["bench", str(tmp_path / "nope")]) == 2


def test_make_corpus_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert cli_dispatch(["make-corpus", str(a), "--n", "4"]) == 0
    assert cli_dispatch(["make-corpus", str(b), "--n", "4"]) == 0
    for fa, fb in zip(sorted(a.iterdir()), sorted(b.iterdir())):
        assert fa.read_bytes() == fb.read_bytes()
