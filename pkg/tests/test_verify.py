import pytest

from sta_fields.verify import SUITES, check_names, report, run_suite


def test_every_suite_passes_on_a_clean_build():
    results = run_suite("all")
    rep = report(results, "all")
    assert rep["passed"] and rep["failed"] == 0
    assert rep["count"] == len(check_names("all")) == len(results)
    assert {r.suite for r in results} == set(SUITES)


def test_em_suite_is_large_enough():
    assert len(check_names("em")) >= 20


def test_report_lists_name_residual_tolerance_and_verdict():
    rep = report(run_suite("polar"), "polar")
    for check in rep["checks"]:
        assert set(check) == {"suite", "name", "residual", "tolerance", "passed"}
        assert check["residual"] <= check["tolerance"]


@pytest.mark.parametrize("target", ["algebra.cayley_matches_dirac_matrices", "cayley_matches_dirac_matrices"])
def test_fault_injection_fails_only_the_target(target):
    results = run_suite("algebra", fault=target, fault_seed=3)
    failed = [r.name for r in results if not r.passed]
    assert failed == ["cayley_matches_dirac_matrices"]
    bad = next(r for r in results if not r.passed)
    assert 10 * bad.tolerance <= bad.residual <= 100 * bad.tolerance + 1e-12


def test_unknown_names_raise():
    with pytest.raises(ValueError):
        run_suite("optics")
    with pytest.raises(ValueError):
        run_suite("all", fault="no_such_check")
