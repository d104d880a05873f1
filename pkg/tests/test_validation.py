import dataclasses
import json

import pytest

from latgreen import validation
from latgreen.errors import ConfigError, FitError, ParameterError
from latgreen.validation import SuiteConfig, ValidationReport


def test_core_checks_pass(suite_report):
    failing = [c.id for c in suite_report.checks if c.category == "core" and not c.passed]
    assert failing == []
    assert suite_report.passed


def test_every_group_is_present(suite_report):
    groups = {c.id.split("[")[0] for c in suite_report.checks}
    for g in validation.DEFAULT_TOLERANCES:
        assert g in groups, g


def test_ids_are_unique_and_sorted(suite_report):
    ids = [c.id for c in suite_report.checks]
    assert ids == sorted(set(ids))


def test_findings_name_each_literal_discrepancy(suite_report):
    text = "\n".join(suite_report.findings)
    for group in ("literal.two_branch", "literal.prefactor", "literal.elliptic",
                  "literal.log_value", "literal.constant", "experimental.buhring"):
        assert group in text
    assert any(f.startswith("square: calibrated constant") for f in suite_report.findings)


def test_strict_mode_counts_literal_checks(suite_report):
    strict = dataclasses.replace(suite_report, strict_paper=True)
    assert not strict.passed
    assert strict.summary["failed"] > 0
    # experimental checks never gate
    exp = [c for c in suite_report.checks if c.category == "experimental"]
    assert exp and not any(c.passed for c in exp)


def test_json_round_trip(suite_report):
    text = suite_report.to_json()
    back = ValidationReport.from_json(text)
    assert back == suite_report
    data = json.loads(text)
    assert data["version"] == validation.REPORT_VERSION
    assert data["summary"] == suite_report.summary


def test_uncomputable_check_serializes_as_null(suite_report):
    check = next(c for c in suite_report.checks if c.id.startswith("literal.fc_domain"))
    assert check.difference is None and "DomainError" in check.note
    assert json.loads(suite_report.to_json())["checks"][suite_report.checks.index(check)][
        "difference"] is None


def test_tampered_evaluator_is_caught(monkeypatch):
    monkeypatch.setenv(validation.WORKERS_ENV, "2")
    good = validation.DEFAULT_EVALUATORS["chain1d.closed"]
    report = validation.run_identity_suite(
        evaluators={"chain1d.closed": lambda r, t: good(r, t) * (1 + 1e-6)})
    bad = [c for c in report.checks if not c.passed and c.category == "core"]
    assert bad and all(c.id.startswith("chain.identity") for c in bad)
    assert not report.passed


def test_unknown_evaluator():
    with pytest.raises(ParameterError):
        validation.run_identity_suite(evaluators={"chain1d.nope": abs})


def test_bad_worker_count(monkeypatch):
    monkeypatch.setenv(validation.WORKERS_ENV, "many")
    with pytest.raises(ConfigError):
        validation.run_identity_suite()


@pytest.mark.parametrize("data", [
    [],
    {"chain_tt": [2]},
    {"chain_t": 2},
    {"chain_t": []},
    {"chain_t": ["2"]},
    {"chain_t": [True]},
    {"chain_r_max": -1},
    {"chain_r_max": 2.5},
    {"nnn_tau": [[0.3]]},
    {"tolerances": {"chain.nope": 1e-3}},
    {"tolerances": {"chain.oracle": -1}},
    {"tolerances": []},
])
def test_config_rejects(data):
    with pytest.raises(ConfigError):
        SuiteConfig.from_mapping(data)


def test_config_accepts_complex_pairs_and_overrides():
    cfg = SuiteConfig.from_mapping({"chain_t": [2, [1, 2]], "nnn_tau": [[0.3, 0.2]],
                                    "tolerances": {"chain.oracle": 1e-9}})
    assert cfg.chain_t == (2, 1 + 2j)
    assert cfg.nnn_tau == ((0.3, 0.2),)
    assert cfg.tol("chain.oracle") == 1e-9
    assert cfg.tol("chain.hyp") == validation.DEFAULT_TOLERANCES["chain.hyp"]


def test_config_load(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"square_r_max": 2}')
    assert SuiteConfig.load(path).square_r_max == 2
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        SuiteConfig.load(path)
    with pytest.raises(ConfigError):
        SuiteConfig.load(tmp_path / "missing.json")


def test_calibration_chain():
    rep = validation.calibrate_prefactor("chain1d")
    assert rep.constant == pytest.approx(1, abs=1e-9)
    assert rep.valid and rep.consistent_with_stated


@pytest.mark.parametrize("family,expected", [
    ("square", 1.0), ("honeycomb-form", 2.0), ("triangular-form", 1.0)])
def test_calibration_constants(family, expected):
    rep = validation.calibrate_prefactor(family)
    assert rep.constant == pytest.approx(expected, rel=1e-9)
    assert rep.relative_spread < 1e-6
    assert not rep.consistent_with_stated
    assert "differs from the stated value" in rep.finding()


def test_calibration_report_round_trip():
    rep = validation.calibrate_prefactor("square", sample_ts=[1.5, 2, 2 + 1j])
    assert validation.CalibrationReport.from_dict(json.loads(json.dumps(rep.to_dict()))) == rep


def test_calibration_errors():
    with pytest.raises(FitError):
        validation.calibrate_prefactor("square", sample_ts=[2, 3])
    with pytest.raises(ParameterError):
        validation.calibrate_prefactor("kagome")
