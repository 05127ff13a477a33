# tests/test_report_export.py

import json

import pytest
from filelock import Timeout

from crofton_verifier import make_row
from data_validation import Report, RunConfig
from report_export import ReportExporter, ReportExportError


@pytest.fixture
def exporter():
    return ReportExporter()


@pytest.fixture
def payload():
    rows = [
        make_row("linearity", "t=1", 2.001, 2.0, 0.002, details={"t": 1.0}),
        make_row("linearity", "t=2", 1.999, 2.0, 0.002, details={"t": 2.0}),
    ]
    cfg = RunConfig(subcommand="estimate-c", n=2, seed=7)
    report = Report(version="0.1.0", config=cfg.echo(), rows=rows, summary={"pass": True, "c_hat": 2.0})
    return report.to_payload()


def test_render_json_is_canonical(exporter, payload):
    text = exporter.render(payload, "json")
    assert text.endswith("}\n")
    assert json.loads(text) == payload
    assert text == json.dumps(payload, sort_keys=True, indent=2) + "\n"
    assert text.index('"config"') < text.index('"rows"') < text.index('"summary"')


def test_render_json_rejects_nan(exporter, payload):
    payload["summary"]["c_hat"] = float("nan")
    with pytest.raises(ReportExportError):
        exporter.render(payload, "json")


def test_render_csv_flattens_rows(exporter, payload):
    lines = exporter.render(payload, "csv").splitlines()
    header = lines[0].split(",")
    assert "suite" in header and "details.t" in header
    assert len(lines) == 3
    assert lines[1].startswith("linearity,t=1,")


def test_render_csv_keeps_sample_counts_integral(exporter, payload):
    payload["rows"][0]["samples"] = 65536
    payload["rows"][0]["method"] = "monte_carlo"
    lines = exporter.render(payload, "csv").splitlines()
    header = lines[0].split(",")
    column = header.index("samples")
    assert lines[1].split(",")[column] == "65536"
    assert lines[2].split(",")[column] == ""
    assert "65536.0" not in lines[1]


def test_render_unknown_format(exporter, payload):
    with pytest.raises(ReportExportError):
        exporter.render(payload, "xml")


def test_validate_rejects_incomplete_report(exporter, payload):
    del payload["summary"]
    with pytest.raises(ReportExportError):
        exporter.validate(payload)


def test_validate_rejects_bad_row(exporter, payload):
    payload["rows"][0]["tolerance"] = -1.0
    with pytest.raises(ReportExportError):
        exporter.validate(payload)


def test_write_to_stdout(exporter, payload, capsys):
    exporter.write(payload, None)
    assert json.loads(capsys.readouterr().out) == payload


def test_write_to_file(exporter, payload, tmp_path):
    target = tmp_path / "report.json"
    exporter.write(payload, target)
    first = target.read_bytes()
    exporter.write(payload, str(target))
    assert target.read_bytes() == first
    assert first.decode("utf-8") == exporter.render(payload, "json")
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".report.json.")]


def test_write_csv_file(exporter, payload, tmp_path):
    target = tmp_path / "report.csv"
    exporter.write(payload, target, "csv")
    assert target.read_text(encoding="utf-8").startswith("suite,case,")


def test_write_into_missing_directory(exporter, payload, tmp_path):
    with pytest.raises(ReportExportError):
        exporter.write(payload, tmp_path / "missing" / "report.json")


def test_failed_replace_leaves_no_temp_file(exporter, payload, tmp_path, mocker):
    mocker.patch("report_export.os.replace", side_effect=OSError("disk full"))
    target = tmp_path / "report.json"
    with pytest.raises(ReportExportError, match="disk full"):
        exporter.write(payload, target)
    assert not target.exists()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".report.json.")]


def test_lock_timeout(exporter, payload, tmp_path, mocker):
    lock = mocker.patch("report_export.FileLock").return_value
    lock.acquire.side_effect = Timeout(str(tmp_path / "report.json.lock"))
    with pytest.raises(ReportExportError, match="lock"):
        exporter.write(payload, tmp_path / "report.json")
