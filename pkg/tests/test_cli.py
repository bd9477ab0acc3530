"""Tests for the command-line front end and its exit-code contract."""

import json

import numpy as np
import pytest
from typer.testing import CliRunner

from src.cli import app

runner = CliRunner()


def invoke(*args: str):
    return runner.invoke(app, ["--log-level", "ERROR", *args])


def report(result) -> dict:
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


class TestGenerate:
    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            report(invoke("generate", "--beta", "0.5", "--n", "300", "--seed", "7", "--out", str(out)))
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.manifest.json").exists()

    def test_report(self, tmp_path):
        rep = report(invoke("generate", "--beta", "1", "--dim", "2", "--n", "50", "--out", str(tmp_path / "p.csv")))
        assert rep["n"] == 50 and rep["d"] == 2

    @pytest.mark.parametrize("args", [["--n", "0", "--beta", "1"], ["--n", "10", "--beta", "-1"]])
    def test_usage_errors(self, tmp_path, args):
        assert invoke("generate", *args, "--out", str(tmp_path / "p.csv")).exit_code == 2


class TestMicromode:
    def test_two_point_report(self, points_file):
        rep = report(invoke("micromode", "--data", str(points_file([-2.0, 2.0]))))
        assert rep["found"] and rep["status"] == "found"
        assert rep["x_plus"][0] == pytest.approx(np.sqrt(3.0), abs=1e-8)
        assert rep["width"] == pytest.approx(np.sqrt(3.0), abs=1e-6)
        assert rep["flags"]["B_n"] is None
        assert rep["bounds"] is None
        assert rep["d_n"] is None
        assert rep["certification_radius"] == pytest.approx(0.5)
        assert rep["pd_radius"] == rep["certificate"]["pd_radius"]

    def test_generated_data_with_bounds(self):
        rep = report(invoke("micromode", "--beta", "0.5", "--n", "500", "--seed", "1", "--proxy", "radial"))
        assert rep["n"] == 500
        assert set(rep["flags"]) == {"A_n", "A_prime_n", "B_n", "A", "E_n"}
        assert rep["d_n"]["real"]
        assert rep["certification_radius"] == pytest.approx(rep["d_n"]["d_n_minus"])
        if rep["found"] and rep["bounds"] is not None:
            assert "margins" in rep["bounds"]

    def test_writes_report(self, points_file, tmp_path):
        out = tmp_path / "rep" / "mm.json"
        rep = report(invoke("micromode", "--data", str(points_file([-2.0, 2.0])), "--out", str(out)))
        assert json.loads(out.read_text(encoding="utf-8"))["x_plus"] == rep["x_plus"]
        assert (out.parent / "mm.manifest.json").exists()

    def test_order_index_out_of_range(self, points_file):
        assert invoke("micromode", "--data", str(points_file([-2.0, 1.0, 2.0])), "--k", "5").exit_code == 2

    def test_missing_data_file(self, tmp_path):
        assert invoke("micromode", "--data", str(tmp_path / "none.csv")).exit_code == 1

    def test_neither_data_nor_generator(self):
        assert invoke("micromode").exit_code == 2


class TestZigZag:
    def test_exit_report(self, points_file, tmp_path):
        out_dir = tmp_path / "zz"
        rep = report(
            invoke(
                "zigzag",
                "--data",
                str(points_file([-2.0, 2.0])),
                "--kind",
                "subsampling",
                "--exit",
                "--traj",
                "20",
                "--seed",
                "3",
                "--out-dir",
                str(out_dir),
            )
        )
        assert rep["x_plus"] == pytest.approx(np.sqrt(3.0), abs=1e-8)
        assert rep["p_n"] == pytest.approx(16.0 / 25.0, rel=1e-6)
        lower, upper = rep["sandwich"]
        assert lower <= rep["p_tau_exact"] <= upper
        assert rep["censored_rate"] == 0
        assert len(list(out_dir.glob("trajectory_*.csv"))) == 20
        assert (out_dir / "manifest.json").exists()

    def test_horizon_report(self, points_file):
        rep = report(invoke("zigzag", "--data", str(points_file([0.0])), "--horizon", "200", "--traj", "2"))
        assert rep["x0"] == 0.0
        assert len(rep["ks"]) == 2
        assert 0 <= rep["mean_ks"] <= 1
        assert rep["mean_switches"] > 0

    def test_needs_exactly_one_mode(self, points_file):
        path = str(points_file([-2.0, 2.0]))
        assert invoke("zigzag", "--data", path).exit_code == 2
        assert invoke("zigzag", "--data", path, "--exit", "--horizon", "10").exit_code == 2

    def test_unknown_kind(self, points_file):
        assert invoke("zigzag", "--data", str(points_file([1.0])), "--kind", "bouncy", "--exit").exit_code == 2

    def test_exit_without_micromode(self, points_file):
        assert invoke("zigzag", "--data", str(points_file([-0.5, 0.5])), "--exit").exit_code == 1


class TestStudy:
    BODY = 'name = "tiny"\nkind = "evt"\nbeta = [0.5]\nn = [200]\nreplicates = 5\nseed = 3\nthreads = 1\n'

    def test_writes_outputs_reproducibly(self, tmp_path):
        config = tmp_path / "tiny.toml"
        config.write_text(self.BODY, encoding="utf-8")
        outs = [tmp_path / "run1", tmp_path / "run2"]
        for out in outs:
            rep = report(invoke("study", "--config", str(config), "--out", str(out), "--no-progress"))
            assert rep["rows"] == 5 and rep["rejections"] == 0
            assert rep["files"] == ["tiny.csv", "summary.json"]
            manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
            assert set(manifest["outputs"]) == {"tiny.csv", "summary.json"}
            assert manifest["seed"] == 3
        assert (outs[0] / "tiny.csv").read_bytes() == (outs[1] / "tiny.csv").read_bytes()

    def test_empty_grid(self, tmp_path):
        config = tmp_path / "bad.toml"
        config.write_text('kind = "evt"\nbeta = []\n', encoding="utf-8")
        assert invoke("study", "--config", str(config), "--out", str(tmp_path / "o")).exit_code == 2

    def test_missing_config(self, tmp_path):
        assert invoke("study", "--config", str(tmp_path / "none.toml")).exit_code == 2
