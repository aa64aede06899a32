import pytest

from girylab.errors import BadConfig, UnknownSuite
from girylab.suites import DEFAULT_SUITES, SuiteConfig, run_suite, run_suites


@pytest.mark.parametrize("name", DEFAULT_SUITES)
def test_suite_green_with_small_budget(name):
    rep = run_suite(name, SuiteConfig(random_cases=100, seed=11))
    assert rep.ok, rep.failures[:3]
    assert rep.cases > 0


def test_divergence_suite_reports_failure():
    rep = run_suite("divergence", SuiteConfig())
    assert not rep.ok and rep.failure_count == 1


def test_reports_sorted_and_deterministic():
    cfg = SuiteConfig(suites=["refinement", "permutation-min"], seed=5)
    a = [r.to_json(timing=False) for r in run_suites(cfg)]
    b = [r.to_json(timing=False) for r in run_suites(cfg)]
    assert a == b
    assert [r["suite"] for r in a] == ["permutation-min", "refinement"]


def test_config_validation():
    with pytest.raises(UnknownSuite):
        SuiteConfig(suites=["nosuch"]).validate()
    for bad in ({"grid": 0}, {"enumeration_cap": 0}, {"random_cases": -1}, {"n": 0}):
        with pytest.raises(BadConfig):
            SuiteConfig(**bad).validate()
