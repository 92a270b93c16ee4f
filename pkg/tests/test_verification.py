import itertools

import numpy as np
import pytest

from grmbot.modules import verification
from grmbot.modules.verification import (
    SUITES,
    Claim,
    SuiteReport,
    Verification,
    claim,
    run_verification_suite,
)
from grmbot.utils.errors import BudgetExceeded, NotExactCase


def _one_claim(passed=True):
    def runner(extended=False):
        yield Claim("stub", "grm", 1, 1 if passed else 2, passed)
    return runner


def test_claim_compares_values():
    assert claim("x", "grm", 7, lambda: 7).passed
    failed = claim("x", "grm", 7, lambda: 8)
    assert not failed.passed
    assert failed.measured == 8


def test_claim_records_domain_errors():
    def measure():
        raise NotExactCase("bound only")

    result = claim("x", "grm", 7, measure)
    assert not result.passed
    assert result.measured == "NotExactCase: bound only"


def test_claim_lets_budget_errors_escape():
    def measure():
        raise BudgetExceeded("too big")

    with pytest.raises(BudgetExceeded):
        claim("x", "grm", 7, measure)


def test_report_layout():
    report = SuiteReport("oracles", [Claim("a", "lem:c2", 1, 1, True),
                                     Claim("b", "lem:c3", 2, 3, False)], 12)
    assert not report.passed
    assert [c.id for c in report.failures()] == ["b"]
    data = report.to_json()
    assert set(data) == {"suite", "claims", "elapsed_ms"}
    assert data["claims"][1] == {"id": "b", "provenance": "lem:c3", "expected": 2,
                                 "measured": 3, "pass": False}


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_verification_suite("everything")
    assert "all" in SUITES


def test_suite_without_timing(monkeypatch):
    monkeypatch.setattr(verification, "union_oracles", _one_claim())
    report = run_verification_suite("oracles", timing=False)
    assert report.elapsed_ms == 0
    assert report.passed
    assert report.suite == "oracles"


def test_keyword_fails_on_failed_claim(monkeypatch):
    monkeypatch.setattr(verification, "union_oracles", _one_claim(passed=False))
    with pytest.raises(AssertionError, match="stub"):
        Verification().run_suite("oracles")


def test_keyword_returns_report(monkeypatch):
    monkeypatch.setattr(verification, "union_oracles", _one_claim())
    data = Verification().run_suite("oracles")
    assert data["claims"][0]["pass"] is True


def test_named_quadratic_examples():
    named = list(itertools.islice(verification.quadratic_classifier(), 2))
    assert [c.expected for c in named] == [16, 21]
    assert all(c.passed for c in named)


def test_classifier_agrees_with_direct_weights():
    rng = np.random.default_rng(7)
    coeffs = rng.integers(0, 5, size=(200, 6))
    assert verification._classifier_mismatches(5, 2, coeffs) == 0


@pytest.mark.slow
@pytest.mark.parametrize("suite", [s for s in SUITES if s != "all"])
def test_suite_passes(suite):
    report = run_verification_suite(suite)
    assert report.claims
    assert report.failures() == []


@pytest.mark.slow
def test_parallel_formulas_vs_oracles():
    report = run_verification_suite("formulas-vs-oracles", workers=2, timing=False)
    assert report.passed
