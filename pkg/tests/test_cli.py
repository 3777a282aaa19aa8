"""Command-line interface: artifacts, determinism, exit codes."""

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from poiswav.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    return header, rows


def run(tmp_path, *argv):
    code = main([*argv, "--output-dir", str(tmp_path)])
    assert code == 0
    return tmp_path


class TestEval:
    def test_all_representations_csv(self, tmp_path):
        run(tmp_path, "eval", "--n", "3", "--m", "2", "--a", "0.5", "--repr", "all", "--theta-grid", "0.001:pi:50")
        header, rows = read_csv(tmp_path / "eval.csv")
        assert header == ["theta", "series", "closed", "continuation", "multipole", "max_pairwise_rel_err"]
        assert len(rows) == 50
        worst = max(float(row[5]) for row in rows)
        assert worst <= 1e-9

    def test_single_representation_csv(self, tmp_path):
        run(tmp_path, "eval", "--n", "2", "--m", "1", "--a", "1.0", "--theta-grid", "0.1:3:17")
        header, rows = read_csv(tmp_path / "eval.csv")
        assert header == ["theta", "value"]
        assert len(rows) == 17

    def test_custom_output_name(self, tmp_path):
        run(tmp_path, "eval", "--n", "2", "--m", "1", "--a", "1.0", "--output", "custom.csv")
        assert (tmp_path / "custom.csv").exists()

    def test_figures_flag_writes_png(self, tmp_path):
        run(tmp_path, "eval", "--n", "2", "--m", "1", "--a", "1.0", "--figures")
        png = tmp_path / "eval.png"
        assert png.exists() and png.stat().st_size > 0

    def test_no_figures_by_default(self, tmp_path):
        run(tmp_path, "eval", "--n", "2", "--m", "1", "--a", "1.0")
        assert not (tmp_path / "eval.png").exists()


class TestCoeffs:
    def test_symbolic_table(self, tmp_path):
        run(tmp_path, "coeffs", "--m", "1", "--symbolic-n")
        payload = json.loads((tmp_path / "coeffs.json").read_text())
        assert payload["n"] is None
        assert payload["alpha"] == [[1], [0, 1]]
        rows = payload["R"]
        assert rows[0]["rendered"] == ["-n - 3", "n - 1"]
        assert rows[1]["rendered"] == ["n + 1", "-n + 3"]
        assert rows[0]["coeffs"] == [[-3, -1], [-1, 1]]

    def test_numeric_table(self, tmp_path):
        run(tmp_path, "coeffs", "--m", "2", "--n", "3")
        payload = json.loads((tmp_path / "coeffs.json").read_text())
        assert payload["n"] == 3
        assert payload["alpha"] == [[1], [0, 1], [0, 1, 1]]
        for row in payload["R"]:
            assert all(isinstance(c, (int, float)) for c in row["coeffs"])

    def test_needs_dimension_or_symbolic(self, tmp_path):
        assert main(["coeffs", "--m", "1", "--output-dir", str(tmp_path)]) == 3


class TestTransform:
    ARGS = ("transform", "--n", "2", "--m", "1", "--l-max", "6", "--a-count", "40", "--theta-grid", "0:pi:31")

    def test_artifacts(self, tmp_path):
        run(tmp_path, *self.ARGS)
        header, rows = read_csv(tmp_path / "transform.csv")
        assert header == ["a", "theta", "value"]
        assert len(rows) == 40 * 31
        meta = json.loads((tmp_path / "transform.json").read_text())
        assert meta["n"] == 2 and meta["m"] == 1
        assert meta["input"]["source"] == "random"

    def test_deterministic_across_runs_and_threads(self, tmp_path):
        d1 = tmp_path / "r1"
        d2 = tmp_path / "r2"
        d4 = tmp_path / "r4"
        for d in (d1, d2):
            d.mkdir()
            run(d, *self.ARGS)
        d4.mkdir()
        run(d4, *self.ARGS, "--threads", "4")
        bytes1 = (d1 / "transform.csv").read_bytes()
        assert (d2 / "transform.csv").read_bytes() == bytes1
        assert (d4 / "transform.csv").read_bytes() == bytes1

    def test_explicit_input_function(self, tmp_path):
        fn = tmp_path / "f.json"
        fn.write_text(json.dumps({"n": 2, "coeffs": [0.0, 1.0, 0.5]}))
        run(tmp_path, "transform", "--n", "2", "--m", "1", "--input", str(fn), "--a-count", "10", "--theta-grid", "0:pi:5")
        meta = json.loads((tmp_path / "transform.json").read_text())
        assert meta["input"]["source"] == str(fn)

    def test_input_dimension_mismatch(self, tmp_path):
        fn = tmp_path / "f.json"
        fn.write_text(json.dumps({"n": 3, "coeffs": [0.0, 1.0]}))
        code = main(["transform", "--n", "2", "--m", "1", "--input", str(fn), "--output-dir", str(tmp_path)])
        assert code == 3


class TestInvert:
    def test_round_trip_report(self, tmp_path):
        run(tmp_path, "invert", "--n", "2", "--m", "2", "--l-max", "8")
        report = json.loads((tmp_path / "invert.json").read_text())
        assert report["kind"] == "bilinear_inversion"
        assert report["l2_error"] <= 1e-3
        recon = np.asarray(report["reconstructed_coeffs"])
        orig = np.asarray(report["original_coeffs"])
        assert recon[1:] == pytest.approx(orig[1:], rel=1e-3)

    def test_linear_kind(self, tmp_path):
        # gamma_1 has a fat left tail; the default a_min = 1e-3 leaves a
        # ~0.6% truncation residual, so widen the grid to hit 1e-3
        run(
            tmp_path,
            "invert", "--n", "3", "--m", "1", "--kind", "linear", "--flavor", "linear", "--l-max", "8",
            "--a-min", "1e-4", "--a-max", "50", "--a-count", "400",
        )
        report = json.loads((tmp_path / "invert.json").read_text())
        assert report["kind"] == "linear_inversion"
        assert report["l2_error"] <= 1e-3


class TestEuclid:
    def test_reports(self, tmp_path):
        run(tmp_path, "euclid", "--n", "2", "--m", "1", "--s-count", "101")
        header, rows = read_csv(tmp_path / "euclid.csv")
        assert header == ["s", "profile"]
        assert len(rows) == 101
        report = json.loads((tmp_path / "euclid.json").read_text())
        assert report["convergence"]["monotone"] is True
        assert report["zero_mean"]["flat_ratio"] <= 1e-8
        assert report["decay_slope"] == pytest.approx(-3.0, abs=0.05)
        assert "localization" not in report

    def test_localization_block(self, tmp_path):
        run(tmp_path, "euclid", "--n", "2", "--m", "1", "--s-count", "51", "--localization")
        report = json.loads((tmp_path / "euclid.json").read_text())
        assert report["localization"]["statistic_ii"]["probe_ratio"]["monotone_blowup"] is True


class TestVerify:
    def test_fast_suites_pass(self, tmp_path, capsys):
        assert main(["verify", "--fast", "--output-dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "FAIL" not in out
        report = json.loads((tmp_path / "verify.json").read_text())
        assert report["passed"] is True
        assert len(report["suites"]) == 7


class TestExitCodes:
    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as err:
            main(["eval", "--n", "2"])  # missing required --m/--a
        assert err.value.code == 2

    def test_domain_error_is_3(self, tmp_path):
        code = main(["eval", "--n", "2", "--m", "1", "--a", "1.0", "--theta-grid", "0:5:10", "--output-dir", str(tmp_path)])
        assert code == 3

    def test_missing_input_is_4(self, tmp_path):
        code = main(["transform", "--n", "2", "--m", "1", "--input", str(tmp_path / "nope.json"), "--output-dir", str(tmp_path)])
        assert code == 4

    def test_output_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("POISWAV_OUTPUT_DIR", str(tmp_path))
        assert main(["eval", "--n", "2", "--m", "1", "--a", "1.0"]) == 0
        assert (tmp_path / "eval.csv").exists()


def test_console_script(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "poiswav.cli", "eval", "--n", "2", "--m", "1", "--a", "0.5", "--output-dir", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "eval.csv").exists()
