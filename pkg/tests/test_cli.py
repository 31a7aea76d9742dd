#!/usr/bin/env python3
"""
Tests for the command-line entry point and its exit codes.
"""

import json
import logging

from spinlab.cli import EXIT_FAILURE, EXIT_OK, EXIT_SAMPLED, EXIT_USAGE, exit_code, main
from spinlab.main import SpinLab

logger = logging.getLogger(__name__)


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_exit_code_mapping():
    assert exit_code({"success": True}) == EXIT_OK
    assert exit_code({"success": True, "sampled": True}) == EXIT_SAMPLED
    assert exit_code({"success": False, "error_type": "precondition"}) == EXIT_USAGE
    assert exit_code({"success": False, "error_type": "not_spin"}) == EXIT_USAGE
    assert exit_code({"success": False, "error_type": "verification"}) == EXIT_FAILURE
    assert exit_code({"success": False, "error_type": "cap_exceeded"}) == EXIT_FAILURE


def test_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["verify", "nonsense"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_coroot_suite_rejects_small_dimension(capsys):
    assert main(["verify", "coroots", "--dim", "4"]) == EXIT_USAGE
    result = _stdout_json(capsys)
    assert result["error_type"] == "config"


def test_verify_suite(capsys, tmp_path):
    target = tmp_path / "arith.json"
    assert main(["verify", "tori", "--seed", "3", "--output", str(target)]) == EXIT_OK
    result = _stdout_json(capsys)
    assert result["report"]["suite"] == "tori"
    assert json.loads(target.read_text())["success"] is True


def test_verify_needs_suite_or_file(capsys):
    assert main(["verify"]) == EXIT_USAGE


def test_approx_then_verify_file(capsys, output_dir):
    assert main(["approx", "unit", "3", "5"]) == EXIT_OK
    result = _stdout_json(capsys)
    path = output_dir / "approx_unit.json"
    assert result["file"] == str(path)
    certificate = json.loads(path.read_text())
    assert certificate["kind"] == "unit"
    assert certificate["congruences"][0]["lhs"] == 3

    assert main(["verify", "--file", str(path)]) == EXIT_OK
    assert _stdout_json(capsys)["verification"]["valid"] is True


def test_tampered_file_fails(capsys, tmp_path):
    path = tmp_path / "cert.json"
    assert main(["approx", "unit", "3", "5", "--output", str(path)]) == EXIT_OK
    capsys.readouterr()
    certificate = json.loads(path.read_text())
    certificate["congruences"][0]["rhs"] = 4
    path.write_text(json.dumps(certificate))
    assert main(["verify", "--file", str(path)]) == EXIT_FAILURE
    assert _stdout_json(capsys)["error_type"] == "verification"


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(["verify", "--file", str(tmp_path / "absent.json")]) == EXIT_USAGE


def test_approx_non_unit_target(capsys, output_dir):
    assert main(["approx", "unit", "5", "5"]) == EXIT_USAGE
    result = _stdout_json(capsys)
    assert result["error_type"] == "precondition"
    assert not (output_dir / "approx_unit.json").exists()


def test_approx_wrong_target_count(capsys, output_dir):
    assert main(["approx", "pair", "3", "5"]) == EXIT_USAGE


def test_width_exact(capsys, output_dir):
    assert main(["width", "fa", "3", "--element", "id", "--cap", "10"]) == EXIT_OK
    result = _stdout_json(capsys)
    assert result["report"]["width"] == 0
    assert (output_dir / "width_fa_3.json").exists()


def test_width_cap_exceeded(capsys, output_dir):
    assert main(["width", "fs", "3", "--element", "e12", "--cap", "0"]) == EXIT_FAILURE
    assert _stdout_json(capsys)["error_type"] == "cap_exceeded"


def test_width_sampled(capsys, output_dir):
    assert main(["width", "fs", "27", "--element", "e12", "--cap", "1"]) == EXIT_SAMPLED
    result = _stdout_json(capsys)
    assert result["report"]["mode"] == "sampled"


def test_report(capsys, output_dir):
    assert main(["report"]) == EXIT_OK
    result = _stdout_json(capsys)
    report = result["report"]
    assert report["class_number"] == {"-7": 1, "-23": 3}
    assert report["four_squares_7"] == [2, 1, 1, 1]
    assert report["gamma"]["torus_val_at_3"] == 0
    assert all(report["isometry_mod"].values())
    logger.info("Pinned report re-derived through the CLI")


def test_pinned_report_facade():
    result = SpinLab().pinned_report(0)
    assert result["success"], result.get("error")
    report = result["report"]
    assert report["gamma"]["t"] == 7
    assert report["gamma"]["unit"]
    assert report["gamma"]["inverse_is_conjugate"]
    assert report["gamma"]["torus_val_at_3"] == 0
    assert report["class_number"] == {"-7": 1, "-23": 3}
    assert report["principal_witnesses_t7_below_500"]
    assert report["sl3_commutator_identity"] == {"samples": 1000, "holds": True}
    assert len(report["isometry_mod"]) == 24
    assert all(report["isometry_mod"].values())
    assert report["four_squares_7"] == [2, 1, 1, 1]
