# report_test.py
import json
import logging

import pytest

from report import CheckRecord, ReportDocument, ReportError, RunMetadata, VerificationReport, emit_report, to_json, to_text


def _doc(wall_time=1.25) -> ReportDocument:
    report = VerificationReport()
    report.add(CheckRecord(check_id="a.exact", status="pass", kind="exact", anchor="x = x"))
    report.add(
        CheckRecord(
            check_id="b.numeric",
            status="fail",
            kind="numeric",
            residual=0.5,
            tolerance=1e-8,
            witness="max residual 5.000e-01 >= tolerance 1.0e-08",
            anchor="y = y",
        )
    )
    report.add(CheckRecord(check_id="c.skip", status="skipped", kind="numeric", witness="no group_tag", anchor="z = z"))
    metadata = RunMetadata(
        example="demo",
        config_hash="0" * 64,
        seed=0,
        samples=10,
        tolerance=1e-8,
        checks=["a", "b", "c"],
        conventions={"shift": "left-suspension"},
    )
    return ReportDocument.build(metadata, report, wall_time=wall_time)


def test_summary_counts():
    doc = _doc()
    assert doc.summary == {"pass": 1, "fail": 1, "skipped": 1}
    assert not doc.ok
    with pytest.raises(KeyError):
        VerificationReport().by_id("missing")


def test_json_is_stable():
    text = to_json(_doc(wall_time=1.0))
    assert text.endswith("}\n")
    assert "wall_time" not in text
    assert text == to_json(_doc(wall_time=99.0))
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["records"][1]["residual"] == 0.5
    assert data["metadata"]["schema_version"] == "1"


def test_text_shows_wall_time_and_summary():
    text = to_text(_doc())
    assert "wall time: 1.25s" in text
    assert "pass=1 fail=1 skipped=1" in text
    assert "5.000e-01" in text


def test_failures_are_logged(caplog):
    with caplog.at_level(logging.INFO, logger="report"):
        _doc()
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert "b.numeric: fail" in warnings[0].getMessage()


def test_emit_to_file(tmp_path):
    path = tmp_path / "report.json"
    text = emit_report(_doc(), "json", str(path))
    assert path.read_text(encoding="utf-8") == text


def test_emit_to_stdout(capsys):
    text = emit_report(_doc(), "text")
    assert capsys.readouterr().out == text


def test_emit_errors(tmp_path):
    with pytest.raises(ReportError, match="unknown report format"):
        emit_report(_doc(), "yaml")
    with pytest.raises(ReportError, match="does not exist"):
        emit_report(_doc(), "json", str(tmp_path / "missing" / "report.json"))
