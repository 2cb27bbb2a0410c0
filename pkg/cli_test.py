# cli_test.py
import json

import pytest

from cli import CHECK_GROUPS, SuiteOptions, main, parse_point, run_suite
from spaceconfig import ConfigError

FAST = ["--samples", "20"]


def test_verify_passes(tmp_path):
    out = tmp_path / "s1.json"
    assert main(["verify", "s1_r2", *FAST, "--output", str(out)]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["summary"]["fail"] == 0
    assert doc["metadata"]["checks"] == list(CHECK_GROUPS)
    assert doc["metadata"]["conventions"]["coadjoint"] == "minus_transpose"
    assert doc["metadata"]["conventions"]["sign_table"]["dx"]["parity"] == "odd"


def test_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "so3_cotangent_r3", *FAST, "--seed", "7", "--checks", "closure,nerve,equivariance"]
    assert main([*args, "--output", str(first)]) == 0
    assert main([*args, "--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_checks_are_filtered_in_suite_order(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "t2_c2", "--checks", "duality,anchor", "--output", str(out)]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["metadata"]["checks"] == ["anchor", "duality"]
    assert [r["check_id"] for r in doc["records"]][-1] == "duality.tot"


def test_unwritable_output_is_a_usage_error(tmp_path):
    assert main(["verify", "s1_r2", "--checks", "anchor", "--output", str(tmp_path / "no" / "r.json")]) == 2


def test_unknown_example_and_group():
    assert main(["verify", "does_not_exist"]) == 2
    assert main(["verify", "s1_r2", "--checks", "astrology"]) == 2


def test_list_examples(capsys):
    assert main(["list-examples"]) == 0
    out = capsys.readouterr().out
    assert "so3_cotangent_r3" in out
    assert "n=6 d=3 group_tag=orthogonal" in out


def test_analyze_point(capsys):
    # (1, 0) is off the zero set of (x^2 + y^2)/2 but on the unit circle
    assert main(["analyze-point", "s1_r2", "--point", "1,0"]) == 1
    assert main(["analyze-point", "s1_r2_shifted", "--point", "1,0", "--format", "text"]) == 0
    assert "cli_1: m=(1, 0) regular" in capsys.readouterr().out


def test_analyze_point_uses_configured_points(capsys):
    assert main(["analyze-point", "so3_cotangent_r3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {r["check_id"] for r in doc["records"]} == {"points.off_zero_set", "points.parallel", "points.origin"}


def test_faulty_config_fails_with_a_witness(tmp_path):
    config = tmp_path / "faulty.toml"
    config.write_text(
        "\n".join(
            [
                'name = "faulty"',
                'variables = ["x", "y"]',
                "omega = [[0, -1], [1, 0]]",
                'mu = ["(x^2 + y^2)/2"]',
                "[lie]",
                "dim = 1",
                'rep = [[["1/1000", 1], [-1, 0]]]',
                'group_tag = "orthogonal"',
            ]
        ),
        encoding="utf-8",
    )
    out = tmp_path / "faulty.json"
    assert main(["verify", str(config), "--checks", "hamiltonian", "--output", str(out)]) == 1
    doc = json.loads(out.read_text(encoding="utf-8"))
    failed = {r["check_id"]: r for r in doc["records"] if r["status"] == "fail"}
    assert "hamiltonian.hamilton_condition" in failed
    assert failed["hamiltonian.hamilton_condition"]["witness"]
    assert failed["hamiltonian.hamilton_condition"]["anchor"]


def test_parse_point():
    assert [str(v) for v in parse_point("3/5, 4/5")] == ["3/5", "4/5"]
    with pytest.raises(ConfigError, match="cannot parse point"):
        parse_point("1,x")


def test_run_suite_rejects_unknown_groups(s1):
    with pytest.raises(ConfigError, match="unknown check groups"):
        run_suite(s1, SuiteOptions(checks=["theorem", "bogus"]))
