# backend/tests/test_verifier.py
import math

import pytest

from latmin.verifier import (
    BETA_VALUES,
    CheckResult,
    Relation,
    SuiteVerifier,
    a_constant,
    check_appendix,
    check_beta_conditions,
    check_lemma_suite,
    check_paper_constants,
    check_T_positive,
    kappa,
    run_suite,
)


def test_check_result_close_margin():
    ok = CheckResult.close("x", 1.0004, 1.0, 5e-4)
    assert ok.passed
    assert ok.margin == pytest.approx(1e-4)
    bad = CheckResult.close("x", 1.001, 1.0, 5e-4)
    assert not bad.passed
    assert bad.margin < 0.0


def test_check_result_relative_tolerance():
    result = CheckResult.close("x", 201.0, 200.0, 1e-2, relative=True)
    assert result.tolerance == pytest.approx(2.0)
    assert result.passed


def test_check_result_strict_bounds():
    assert not CheckResult.greater("g", 0.0).passed
    assert CheckResult.less("l", -1e-12).passed
    assert CheckResult.at_most("a", 1e-10, 1e-10).passed


def test_informational_results_never_fail_a_run():
    verifier = SuiteVerifier()
    verifier.results = [CheckResult.info("trend", 1.0, 0.0, passed=False), CheckResult.greater("ok", 1.0)]
    assert verifier.all_passed
    assert verifier.failed() == []
    assert verifier.find("trend").informational


def test_check_line_format():
    line = CheckResult.at_most("residual", 2e-13, 1e-12).line()
    assert line.startswith("PASS residual: computed=")
    assert "expected <= 1e-12" in line
    assert CheckResult.errored("boom", ValueError("x")).line().startswith("FAIL boom")


def test_errored_result():
    result = CheckResult.errored("broken", RuntimeError("nope"))
    assert not result.passed
    assert math.isnan(result.computed)
    assert result.relation is Relation.CLOSE


def test_published_constants_all_pass(budget):
    results = check_paper_constants(budget)
    failed = [r.line() for r in results if not r.passed]
    assert failed == []
    names = {r.name for r in results}
    assert {"A1", "A2", "A", "B", "lhospital", "alt3", "Y0'_bound(sqrt3)"} <= names


def test_a_constant_value():
    assert a_constant() == pytest.approx(-21077.61, abs=0.02)


def test_kappa_negative_on_interval():
    assert kappa(1.0) < 0.0
    assert kappa(math.sqrt(3.0)) < 0.0


def test_beta_conditions_at_tabulated_beta(budget):
    results = {r.name: r for r in check_beta_conditions(1.08, budget)}
    assert set(results) == set(BETA_VALUES)
    for name, reference in BETA_VALUES.items():
        assert results[name].computed == pytest.approx(reference, rel=1e-3)


def test_beta_conditions_signs_elsewhere(budget):
    results = check_beta_conditions(1.1, budget)
    assert all(r.relation in (Relation.GREATER, Relation.LESS) for r in results)


def test_beta_out_of_range():
    with pytest.raises(ValueError):
        check_beta_conditions(2.0)


def test_appendix_suite_passes(budget):
    results = check_appendix(budget, n_samples=100)
    assert [r.line() for r in results if not r.passed] == []


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ValueError, match="Unknown suite"):
        run_suite("nope")


def test_verifier_report_shape(budget):
    report = SuiteVerifier(budget=budget, seed=7).run("constants")
    assert report["suite"] == "constants"
    assert report["seed"] == 7
    assert report["all_passed"]
    assert report["warnings"] == []


@pytest.mark.slow
def test_all_suites_pass(budget):
    verifier = SuiteVerifier(budget=budget, seed=42, n_jobs=2)
    report = verifier.run("all")
    assert [r.line() for r in verifier.failed()] == []
    assert report["all_passed"]
    assert verifier.find("singular_trend").informational


def test_T_positive_on_a_coarse_sample(budget):
    result = check_T_positive(budget, n_samples=50)
    assert result.name == "T_positive"
    assert result.passed
    with pytest.raises(ValueError):
        check_T_positive(budget, n_samples=5)


@pytest.mark.slow
def test_invariant_suite_passes(budget):
    results = {r.name: r for r in check_lemma_suite(budget, seed=42)}
    assert results["sum1_t=0.1"].passed
    assert results["sum1_t=0.1"].expected == pytest.approx(0.1 * 1.41 / 0.6561)
    assert results["dual_b=0.3"].passed
    assert [r.line() for r in results.values() if not r.passed and not r.informational] == []
