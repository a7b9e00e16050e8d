"""CLI surface: flags, output formats, exit codes."""

import io
import json

import pytest

from labelbudget.cli import (
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    EXIT_VALIDATION,
    cli_dispatch,
)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


class TestDist:
    def test_reference_distribution(self):
        code, out, _ = run_cli(
            ["dist", "--p", "0.8", "--eps", "0.01", "--q", "0.8"])
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["result"]["x"] == pytest.approx(0.16, abs=1e-15)
        assert body["result"]["y"] == pytest.approx(0.154, abs=1e-15)
        assert body["result"]["z"] == pytest.approx(0.686, abs=1e-15)
        assert body["version"]
        assert body["input"]["params"]["p"] == 0.8

    def test_correlated_mode_inferred(self):
        code, out, _ = run_cli([
            "dist", "--pw", "0.9", "--pb0", "0.95", "--pb1", "0.95",
            "--qb", "0.9", "--qw", "0.6"])
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["input"]["mode"] == "correlated"
        assert body["result"]["assumption1_satisfied"] is True

    def test_mixed_modes_rejected(self):
        code, _, err = run_cli(["dist", "--p", "0.8", "--pw", "0.9"])
        assert code == EXIT_VALIDATION
        assert "not both" in err


class TestCompare:
    def test_reference_point_single_wins(self):
        code, out, _ = run_cli([
            "compare", "--p", "0.8", "--eps", "0.01", "--q", "0.8",
            "--budget", "1500", "--m", "3"])
        assert code == EXIT_OK
        report = json.loads(out)["result"]["reports"][0]
        assert report["winner"] == "single"
        assert report["plan_agg"]["n"] == 500

    def test_csv_format(self):
        code, out, _ = run_cli([
            "compare", "--p", "0.8", "--eps", "0.01", "--q", "0.8",
            "--budget", "300", "--m", "3", "--m", "5", "--format", "csv"])
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0].startswith("plan_single.k,")
        assert len(lines) == 3


class TestCapacity:
    def test_reference_claim(self):
        code, out, _ = run_cli([
            "capacity", "--p", "0.75", "--eps", "0.1", "--q", "0.75",
            "--n", "1500", "--delta", "0.05"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["models_cramer"] >= 17
        assert result["max_comparisons_hoeffding"] == 0


class TestSampleSize:
    def test_both_bounds_by_default(self):
        code, out, _ = run_cli([
            "samplesize", "--p", "0.75", "--eps", "0.1", "--q", "0.75",
            "--delta", "0.05", "--comparisons", "16"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["n_cramer"] <= 1500
        assert result["n_hoeffding"] > result["n_cramer"]

    def test_single_bound(self):
        code, out, _ = run_cli([
            "samplesize", "--p", "0.75", "--eps", "0.1", "--q", "0.75",
            "--delta", "0.05", "--bound", "cramer"])
        result = json.loads(out)["result"]
        assert "n_hoeffding" not in result


class TestExactAndMc:
    def test_exact_success(self):
        code, out, _ = run_cli([
            "exact", "--p", "0.8", "--eps", "0.01", "--q", "0.8",
            "--budget", "900", "--m", "3"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["plan"]["n"] == 300
        assert 0.5 < result["p_success"] < 1.0

    def test_budget_below_one_point(self):
        code, _, err = run_cli([
            "exact", "--p", "0.8", "--eps", "0.01", "--q", "0.8",
            "--budget", "2", "--m", "3"])
        assert code == EXIT_VALIDATION
        assert "budget below one data point" in err

    def test_mc_reproducible(self):
        argv = ["mc", "--p", "0.8", "--eps", "0.01", "--q", "0.8",
                "--budget", "100", "--trials", "5000", "--seed", "9"]
        _, out_a, _ = run_cli(argv)
        _, out_b, _ = run_cli(argv)
        assert out_a == out_b
        assert json.loads(out_a)["result"]["seed"] == 9


class TestBounds:
    def test_report_fields(self):
        code, out, _ = run_cli([
            "bounds", "--p", "0.75", "--eps", "0.1", "--q", "0.75",
            "--n", "200"])
        assert code == EXIT_OK
        result = json.loads(out)["result"]
        assert result["exact_failure"] <= result["cramer_failure_bound"] + 1e-12
        assert result["exact_failure"] <= result["hoeffding_failure_bound"] + 1e-12

    def test_no_exact(self):
        code, out, _ = run_cli([
            "bounds", "--p", "0.75", "--eps", "0.1", "--q", "0.75",
            "--n", "200", "--no-exact"])
        assert json.loads(out)["result"]["exact_failure"] is None


class TestFigdata:
    def test_fig1_csv(self):
        code, out, _ = run_cli([
            "figdata", "--figure", "fig1", "--range", "n_step=500",
            "--format", "csv"])
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == ("n,comparisons_hoeffding,models_hoeffding,"
                            "comparisons_cramer,models_cramer")
        assert lines[-1].startswith("1500,")

    def test_range_list_parsing(self):
        code, out, _ = run_cli([
            "figdata", "--figure", "fig2b",
            "--range", "k_values=300,600", "--range", "m_list=1,3"])
        assert code == EXIT_OK
        table = json.loads(out)["result"]
        assert [row[0] for row in table["rows"]] == [300, 600]

    def test_bad_range_syntax(self):
        code, _, err = run_cli(["figdata", "--figure", "fig1", "--range", "oops"])
        assert code == EXIT_VALIDATION
        assert "KEY=VALUE" in err


class TestSweepCommand:
    def test_tiny_sweep(self, tmp_path):
        out_path = str(tmp_path / "s.csv")
        code, out, _ = run_cli([
            "sweep", "--resolution", "0.25", "--n-values", "1,2",
            "--m-values", "3", "--out", out_path, "--workers", "1"])
        assert code == EXIT_OK
        summary = json.loads(out)
        assert summary["completed"] is True
        assert summary["violations_a1"] == 0

    def test_grid_cap_exit_code(self, tmp_path):
        code, _, err = run_cli([
            "sweep", "--resolution", "0.01", "--grid-cap", "1000",
            "--out", str(tmp_path / "s.csv")])
        assert code == EXIT_RESOURCE
        assert "coarser" in err


class TestUsageErrors:
    def test_unknown_flag(self):
        code, _, err = run_cli(["compare", "--frobnicate"])
        assert code == EXIT_USAGE
        assert "usage" in err

    def test_no_command(self):
        code, _, _ = run_cli([])
        assert code == EXIT_USAGE

    def test_unknown_command(self):
        code, _, _ = run_cli(["transmogrify"])
        assert code == EXIT_USAGE

    def test_out_of_range_parameter(self):
        code, _, err = run_cli(
            ["dist", "--p", "1.5", "--eps", "0.01", "--q", "0.8"])
        assert code == EXIT_VALIDATION
        assert "p=" in err
