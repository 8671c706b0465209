"""
Tests for the command-line interface
"""

import io
import json
import shutil
import tempfile
from pathlib import Path

import pandas as pd
import pytest
from click.testing import CliRunner

from src import __version__
from src.cli.main import cli
from src.estimators.weibull_tail import theta_hat
from src.models.tail_models import EstimatorVariant, SortedSample

OBSERVATIONS = [0.42, 1.7, 0.93, 2.8, 0.15, 1.1, 3.9, 0.77, 1.35, 2.2]


class TestEstimateCommand:
    """Test cases for `estimate`"""

    def setup_method(self):
        """Set up test fixtures"""
        self.runner = CliRunner()
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def _write(self, text: str) -> Path:
        path = self.temp_dir / "sample.txt"
        path.write_text(text)
        return path

    def test_estimates_to_stdout(self):
        """Test one CSV row per (k, variant)"""
        path = self._write("# heights\n" + "\n".join(str(x) for x in OBSERVATIONS) + "\n")
        result = self.runner.invoke(cli, ["estimate", "--input", str(path), "--k-max", "5"])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(io.StringIO(result.stdout), float_precision="round_trip")
        assert list(frame.columns) == ["k", "variant", "t_n", "a_n", "theta_hat"]
        assert len(frame) == 4 * 3
        assert list(frame["variant"][:3]) == ["V1", "V2", "V3"]

        sample = SortedSample.from_values(OBSERVATIONS)
        row = frame[(frame["k"] == 4) & (frame["variant"] == "V2")].iloc[0]
        assert row["theta_hat"] == pytest.approx(theta_hat(sample, 4, EstimatorVariant.V2).theta_hat, rel=1e-12)

    def test_quantile_columns(self):
        """Test --p adds the extreme quantile columns"""
        path = self._write("\n".join(str(x) for x in OBSERVATIONS))
        result = self.runner.invoke(
            cli, ["estimate", "--input", str(path), "--k-max", "4", "--p", "0.01", "--variants", "V1"]
        )

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert list(frame.columns)[-3:] == ["p", "tau", "quantile_hat"]
        assert len(frame) == 3
        assert (frame["quantile_hat"] > 0).all()

    def test_writes_into_directory(self):
        """Test --out with a directory names the file after the input"""
        path = self._write("\n".join(str(x) for x in OBSERVATIONS))
        out = self.temp_dir / "results"
        result = self.runner.invoke(cli, ["estimate", "--input", str(path), "--k-max", "3", "--out", str(out)])

        assert result.exit_code == 0, result.output
        assert (out / "sample_estimates.csv").exists()

    def test_k_min_beyond_sample(self):
        """Test --k-min >= n fails instead of writing an empty table"""
        path = self._write("\n".join(str(x) for x in OBSERVATIONS))
        result = self.runner.invoke(cli, ["estimate", "--input", str(path), "--k-min", "20"])

        assert result.exit_code == 3
        assert result.stdout == ""
        assert "k-min 20" in result.stderr

    def test_empty_file(self):
        """Test an input with fewer than 3 observations"""
        path = self._write("# nothing here\n\n")
        result = self.runner.invoke(cli, ["estimate", "--input", str(path)])

        assert result.exit_code == 3
        assert "need at least 3 observations" in result.stderr

    def test_non_positive_value(self):
        """Test a zero observation names its line"""
        path = self._write("1.0\n0\n2.0\n3.0\n")
        result = self.runner.invoke(cli, ["estimate", "--input", str(path)])

        assert result.exit_code == 3
        assert "Line 2" in result.stderr

    def test_non_numeric_value(self):
        """Test a line that is not a number"""
        path = self._write("1.0\nabc\n2.0\n3.0\n")
        result = self.runner.invoke(cli, ["estimate", "--input", str(path)])

        assert result.exit_code == 3
        assert "not a number" in result.stderr

    def test_unknown_variant(self):
        """Test --variants with an unknown name"""
        path = self._write("\n".join(str(x) for x in OBSERVATIONS))
        result = self.runner.invoke(cli, ["estimate", "--input", str(path), "--variants", "V4"])

        assert result.exit_code == 2


class TestAmseCommand:
    """Test cases for `amse`"""

    def setup_method(self):
        """Set up test fixtures"""
        self.runner = CliRunner()

    def test_reference_grid(self):
        """Test k = 2..150 for three variants"""
        result = self.runner.invoke(cli, ["amse", "--model", "gamma:1.5,1"])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert list(frame.columns) == ["k", "variant", "bias_sq", "variance", "total"]
        assert len(frame) == 149 * 3
        assert (frame["total"] > 0).all()

    def test_k_max_must_be_below_n(self):
        """Test a usage error exits with 2"""
        result = self.runner.invoke(cli, ["amse", "--model", "absnormal:0,1", "--n", "100", "--k-max", "100"])

        assert result.exit_code == 2
        assert "k-max must be < n" in result.stderr

    def test_unknown_model(self):
        """Test an unknown model family"""
        result = self.runner.invoke(cli, ["amse", "--model", "pareto:1"])

        assert result.exit_code == 2


class TestCompareCommand:
    """Test cases for `compare`"""

    def setup_method(self):
        """Set up test fixtures"""
        self.runner = CliRunner()

    def _compare(self, *args: str) -> dict:
        result = self.runner.invoke(cli, ["compare", *args, "--json"])
        assert result.exit_code == 0, result.output
        return json.loads(result.stdout)

    def test_absnormal(self):
        """Test |N(0,1)| predicts V3 < V1 < V2"""
        report = self._compare("--model", "absnormal:0,1")
        assert report["verdict"]["predicted_order"] == "V3 < V1 < V2"
        assert report["amse_agreement"]["share"] >= 0.8
        assert report["admissible_variants"] == ["V1", "V2", "V3"]

    def test_weibull(self):
        """Test a Weibull model predicts V1 best"""
        report = self._compare("--model", "weibull:2.5,2.5")
        assert report["verdict"]["predicted_order"] == "V1 < min(V2, V3)"
        assert report["verdict"]["case"] == "zero_bias"

    def test_gamma_with_bias_rule(self):
        """Test Gamma(1.5,1) with the sqrt-b rule lands in a negative-bias case"""
        report = self._compare("--model", "gamma:1.5,1", "--k-rule", "sqrt-b")
        assert report["verdict"]["case"].startswith("neg_bias")
        assert report["k_rule"] == "sqrt-b"

    def test_simulated_agreement(self):
        """Test --simulate adds the MSE agreement share"""
        report = self._compare(
            "--model", "absnormal:0,1", "--simulate", "--n", "200", "-N", "4", "--k-min", "10", "--k-max", "40"
        )
        assert 0.0 <= report["mse_agreement"]["share"] <= 1.0
        assert report["mse_agreement"]["k_values"] == list(range(10, 41))

    def test_human_output(self):
        """Test the rich rendering goes to stderr"""
        result = self.runner.invoke(cli, ["compare", "--model", "absnormal:0,1"])
        assert result.exit_code == 0
        assert "V3 < V1 < V2" in result.stderr


class TestSimulateCommand:
    """Test cases for `simulate`"""

    def setup_method(self):
        """Set up test fixtures"""
        self.runner = CliRunner()
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_writes_curves_and_manifest(self):
        """Test MSE and quantile MSE tables plus the manifest"""
        result = self.runner.invoke(cli, [
            "simulate", "--model", "gamma:0.5,1", "--n", "200", "-N", "5", "--k-max", "30",
            "--p", "0.001", "--seed", "11", "--out", str(self.temp_dir),
        ])

        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in self.temp_dir.iterdir()) == [
            "gamma_0.5_1_mse.csv", "gamma_0.5_1_qmse.csv", "manifest.json"
        ]
        manifest = json.loads((self.temp_dir / "manifest.json").read_text())
        assert manifest["seed"] == 11
        assert manifest["replications"] == 5
        assert manifest["models"] == ["gamma:0.5,1"]

    def test_quantile_regime_error(self):
        """Test p >= 1/n is a domain error"""
        result = self.runner.invoke(cli, [
            "simulate", "--model", "gamma:0.5,1", "--n", "200", "-N", "3", "--k-max", "30",
            "--p", "0.1", "--out", str(self.temp_dir),
        ])
        assert result.exit_code == 3


class TestFiguresCommand:
    """Test cases for `figures`"""

    def setup_method(self):
        """Set up test fixtures"""
        self.runner = CliRunner()
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def _figures(self, out: Path):
        return self.runner.invoke(cli, [
            "figures", "--n", "100", "-N", "3", "--k-max", "20", "--svg", "--out", str(out),
        ])

    def test_file_set(self):
        """Test ten CSV tables, five SVG figures, the manifest and the report"""
        result = self._figures(self.temp_dir)

        assert result.exit_code == 0, result.output
        names = [p.name for p in self.temp_dir.iterdir()]
        assert len([name for name in names if name.endswith(".csv")]) == 10
        assert len([name for name in names if name.endswith(".svg")]) == 5
        assert "manifest.json" in names
        assert "REPORT.md" in names

    def test_rerun_is_byte_identical(self):
        """Test the same flags produce identical bytes"""
        first, second = self.temp_dir / "a", self.temp_dir / "b"
        assert self._figures(first).exit_code == 0
        assert self._figures(second).exit_code == 0

        for path in sorted(first.iterdir()):
            assert path.read_bytes() == (second / path.name).read_bytes(), path.name


class TestDiagnoseCommand:
    """Test cases for `diagnose`"""

    def test_json_output(self):
        """Test the KS summary for a small study"""
        runner = CliRunner()
        result = runner.invoke(cli, [
            "diagnose", "--model", "weibull:1,1", "--n", "200", "-N", "20", "--k", "10", "--json",
        ])

        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["k"] == 10
        assert report["replications"] == 20
        assert report["variant"] == "V1"
        assert isinstance(report["passes_ks"], bool)


class TestGroupOptions:
    """Test cases for group-level options"""

    def test_version(self):
        """Test --version"""
        result = CliRunner().invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_config_file(self):
        """Test --config supplies experiment defaults"""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "settings.yaml"
            config_path.write_text("experiment:\n  n: 300\n  k_min: 5\n  k_max: 9\n")
            result = CliRunner().invoke(cli, ["--config", str(config_path), "amse", "--model", "absnormal"])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert sorted(set(frame["k"])) == [5, 6, 7, 8, 9]

    def test_invalid_config_file(self):
        """Test a malformed settings file exits with 2"""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "settings.yaml"
            config_path.write_text("quadrature:\n  node_count: 1\n")
            result = CliRunner().invoke(cli, ["--config", str(config_path), "amse", "--model", "absnormal"])

        assert result.exit_code == 2
