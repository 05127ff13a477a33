# tests/test_cli_report.py

import json
from unittest.mock import patch

import pytest

from cli_report import (
    EXIT_PASS,
    EXIT_STATISTICAL_FAILURE,
    EXIT_USAGE,
    build_parser,
    main,
    parse_t_grid,
)
from crofton_verifier import CroftonReport
from hyperbolic.lorentz_core import UsageError


@pytest.fixture(autouse=True)
def mocked_setup_logging():
    # setup_logging swaps the root handlers, which would detach caplog
    with patch("cli_report.setup_logging") as mock_setup:
        yield mock_setup


def read_report(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_version(capsys):
    assert main(["--version"]) == EXIT_PASS
    assert "0.1.0" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["estimate-c"],
        ["estimate-c", "--n", "two"],
        ["estimate-c", "--n", "2", "--t-grid", "1,x"],
        ["estimate-c", "--n", "2", "--method", "simpson"],
        ["frobnicate", "--n", "2"],
    ],
)
def test_argument_errors_exit_with_usage(argv):
    assert main(argv) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate-c", "--n", "1"],
        ["estimate-c", "--n", "2", "--samples", "10"],
        ["estimate-c", "--n", "2", "--t-grid", "2,1,4,8"],
        ["cnk", "--n", "2", "--points", "65"],
    ],
)
def test_invalid_values_exit_with_usage(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "invalid arguments" in capsys.readouterr().err


def test_parse_t_grid():
    assert parse_t_grid("0.5, 1,2,") == [0.5, 1.0, 2.0]


def test_parser_defaults():
    args = build_parser().parse_args(["cnk", "--n", "3"])
    assert args.method == "auto"
    assert args.t_max == 300.0
    assert args.format == "json"
    assert args.out is None
    assert (args.configurations, args.hilbert_instances, args.triples) == (200, 20, 1000)


def test_estimate_c_report(tmp_path, mocked_setup_logging):
    out = tmp_path / "c.json"
    code = main(["estimate-c", "--n", "2", "--method", "quadrature", "--out", str(out),
                 "--log-level", "DEBUG"])
    assert code == EXIT_PASS
    mocked_setup_logging.assert_called_once_with(level="DEBUG")
    report = read_report(out)
    assert report["version"] == "0.1.0"
    assert report["config"]["subcommand"] == "estimate-c"
    assert "out" not in report["config"] and "workers" not in report["config"]
    assert "runtime" not in report
    assert report["summary"]["pass"] is True
    assert report["summary"]["c_hat"] == pytest.approx(2.0, rel=1e-3)
    assert report["summary"]["warnings"] == []


def test_reports_do_not_depend_on_worker_count(tmp_path):
    outputs = []
    for workers in ("1", "3"):
        out = tmp_path / f"c{workers}.json"
        argv = ["estimate-c", "--n", "4", "--samples", "2000", "--seed", "5",
                "--workers", workers, "--out", str(out)]
        assert main(argv) in (EXIT_PASS, EXIT_STATISTICAL_FAILURE)
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert "Monte Carlo samples" in read_report(tmp_path / "c1.json")["summary"]["warnings"][0]


def test_record_timing(tmp_path):
    out = tmp_path / "sweep.json"
    argv = ["sweep-unbounded", "--n", "2", "--t-max", "20", "--record-timing", "--out", str(out)]
    assert main(argv) == EXIT_PASS
    assert read_report(out)["runtime"]["duration_seconds"] >= 0.0


def test_sweep_to_stdout(capsys):
    assert main(["sweep-unbounded", "--n", "3", "--t-grid", "0.5,1,2"]) == EXIT_PASS
    report = json.loads(capsys.readouterr().out)
    assert [row["observed"] for row in report["rows"][:3]] == pytest.approx([0.5, 1.0, 2.0])
    assert report["summary"]["suites"][0]["suite"] == "unboundedness"


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep-unbounded", "--n", "2", "--format", "csv", "--out", str(out)]) == EXIT_PASS
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("suite,case,")
    assert len(lines) == 1 + 17 + 1


def test_sweep_beyond_double_precision(capsys):
    assert main(["sweep-unbounded", "--n", "2", "--t-max", "800"]) == EXIT_USAGE
    assert "double-precision" in capsys.readouterr().err


def test_quadrature_in_high_dimension_is_a_usage_error():
    assert main(["estimate-c", "--n", "4", "--method", "quadrature"]) == EXIT_USAGE


def test_missing_output_directory(tmp_path):
    out = tmp_path / "missing" / "sweep.json"
    assert main(["sweep-unbounded", "--n", "2", "--out", str(out)]) == EXIT_USAGE


def test_statistical_failure_exit_code(tmp_path, mocker):
    failing = CroftonReport(
        n=2,
        c_hat=2.5,
        c_stderr=0.01,
        halfwidth=0.03,
        intercept=0.0,
        intercept_stderr=0.01,
        reduced_chi2=9.0,
        rows=[],
        summaries=[],
        passed=False,
    )
    mocker.patch("cli_report.estimate_c", return_value=failing)
    out = tmp_path / "c.json"
    assert main(["estimate-c", "--n", "2", "--out", str(out)]) == EXIT_STATISTICAL_FAILURE
    assert read_report(out)["summary"]["pass"] is False


def test_unexpected_error(mocker, capsys):
    mocker.patch("cli_report.unboundedness_sweep", side_effect=RuntimeError("boom"))
    assert main(["sweep-unbounded", "--n", "2"]) == EXIT_USAGE
    assert "internal error: boom" in capsys.readouterr().err


@pytest.mark.slow
def test_cnk_command(tmp_path):
    out = tmp_path / "cnk.json"
    argv = ["cnk", "--n", "2", "--method", "quadrature", "--points", "4", "--configurations", "2",
            "--transforms", "4", "--t-max", "20", "--hilbert-instances", "2",
            "--triples", "10", "--out", str(out)]
    assert main(argv) == EXIT_PASS
    report = read_report(out)
    assert report["summary"]["defect_max"] < 0.0
    suites = {suite["suite"] for suite in report["summary"]["suites"]}
    assert {"set-cnk", "group-cnk", "left-invariance", "unboundedness", "hilbert", "gram"} == suites


@pytest.mark.slow
def test_verify_crofton_command(tmp_path):
    out = tmp_path / "crofton.json"
    argv = ["verify-crofton", "--n", "2", "--method", "quadrature", "--pairs", "2",
            "--transforms", "2", "--out", str(out)]
    assert main(argv) == EXIT_PASS
    assert read_report(out)["summary"]["c_hat"] == pytest.approx(2.0, rel=1e-3)


def test_cnk_suite_sizes_reach_the_suites(mocker):
    crofton = mocker.patch("cli_report.estimate_c")
    suites = mocker.patch("cli_report.run_cnk_suites", side_effect=UsageError("stop"))
    argv = ["cnk", "--n", "2", "--hilbert-instances", "7", "--triples", "30", "--configurations", "4"]
    assert main(argv) == EXIT_USAGE
    crofton.assert_called_once()
    kwargs = suites.call_args.kwargs
    assert (kwargs["hilbert_instances"], kwargs["triples"], kwargs["configurations"]) == (7, 30, 4)


def test_usage_error_is_reported_once(mocker, capsys, caplog):
    mocker.patch("cli_report.Config.LOG_FILE", None)
    assert main(["estimate-c", "--n", "1"]) == EXIT_USAGE
    assert capsys.readouterr().err.count("invalid arguments") == 1
    assert not [record for record in caplog.records if record.levelname == "ERROR"]


def test_usage_error_goes_to_the_log_file_when_configured(mocker, capsys, caplog):
    mocker.patch("cli_report.Config.LOG_FILE", "logs/measured_walls.log")
    assert main(["estimate-c", "--n", "1"]) == EXIT_USAGE
    assert capsys.readouterr().err.count("invalid arguments") == 1
    assert any("invalid arguments" in record.getMessage() for record in caplog.records)
