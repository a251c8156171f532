import copy

import pytest

from apparent_size import validate
from apparent_size.config import DEFAULT_CONFIG
from apparent_size.validate import run_verification


@pytest.fixture(scope="module")
def quick_config():
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["montecarlo"]["samples"] = 200_000
    return config


def test_verification_all_pass(quick_config):
    report, critical_failed = run_verification(quick_config, seed=1)
    assert report
    failing = [row["rule_id"] for row in report if row["status"] != "PASS"]
    assert failing == []
    assert critical_failed is False
    assert {row["severity"] for row in report} <= {"critical", "high", "medium"}


def test_verification_flags_critical_failure(quick_config, monkeypatch):
    monkeypatch.setattr(validate, "spill_threshold", lambda: 1.5)
    report, critical_failed = run_verification(quick_config, seed=1)
    spill = [row for row in report if row["rule_id"] == "spill_threshold"]
    assert spill[0]["status"] == "FAIL"
    assert critical_failed is True


def test_verification_reports_raised_errors(quick_config, monkeypatch):
    def broken(*args, **kwargs):
        raise RuntimeError("no bracket")

    monkeypatch.setattr(validate, "rect_lmax", broken)
    report, critical_failed = run_verification(quick_config, seed=1)
    failed = [row for row in report if row["rule_id"] == "billboard_boundary"]
    assert failed[0]["status"] == "FAIL"
    assert "no bracket" in failed[0]["details"]
    assert critical_failed is True


def test_verification_ignores_non_critical_failures(quick_config, monkeypatch):
    config = copy.deepcopy(quick_config)
    config["validation"]["critical_rules"] = []
    monkeypatch.setattr(validate, "spill_threshold", lambda: 1.5)
    _, critical_failed = run_verification(config, seed=1)
    assert critical_failed is False


def test_verification_disk_asymptote_rule_uses_inverse_r_correction(quick_config):
    report, _ = run_verification(quick_config, seed=1)
    row = next(row for row in report if row["rule_id"] == "disk_xmax_asymptote")
    assert row["reference[-]"] == pytest.approx(70.706553, abs=1e-6)
    assert row["tolerance[-]"] == 1e-4
    assert row["status"] == "PASS"
    rule_ids = {row["rule_id"] for row in report}
    assert {"keyhole_support", "strip_telescoping"} <= rule_ids
