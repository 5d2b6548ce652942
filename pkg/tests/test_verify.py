import json

import pytest

from archimax.verify import (
    FAIL,
    PASS,
    ReportEntry,
    VerificationReport,
    check_copula_axioms,
    check_kendall,
    check_level_curves,
    check_masses,
    default_battery,
    grid_oracle,
    run_suite,
)


def test_report_overall_ignores_flags():
    rep = VerificationReport()
    rep.extend([ReportEntry("a", PASS, 0.0, 0.0, 1e-9), ReportEntry("b", "flag", 1.0, 0.0, 1e-9)])
    assert rep.overall
    rep.extend([ReportEntry("c", FAIL, 1.0, 0.0, 1e-9)])
    assert not rep.overall
    assert [e.name for e in rep.failures()] == ["c"]
    data = json.loads(rep.to_json())
    assert data["overall"] is False
    assert {"name", "status", "measured", "expected", "tolerance", "seed"} <= set(data["checks"][0])


def test_axioms_and_grid_on_mixed_pair(mixed_pair):
    assert check_copula_axioms(mixed_pair, 32).status == PASS
    assert grid_oracle(mixed_pair, 8).status == PASS


def test_level_curves(exp_mixed):
    assert all(e.status == PASS for e in check_level_curves(exp_mixed))


def test_masses_discrete_pair(discrete_pair):
    entries = check_masses(discrete_pair)
    assert entries and all(e.status == PASS for e in entries)


def test_kendall_check_detects_wrong_model(mixed_pair, pi_copula):
    # samples from the independence copula judged against the mixed model must fail
    class Swapped:
        def __getattr__(self, name):
            return getattr(mixed_pair, name)

        def kernel_quantile_array(self, x, u):
            return pi_copula.kernel_quantile_array(x, u)

    e = check_kendall(Swapped(), n=20_000, seed=0)
    assert e.status == FAIL


def test_battery_contents():
    names = [b.name for b in default_battery()]
    assert len(names) == 6


def test_unknown_suite(pi_copula):
    with pytest.raises(ValueError):
        run_suite(pi_copula, "nope")


def test_suite_runs(pi_copula):
    rep = run_suite(pi_copula, "kernel")
    assert rep.overall
