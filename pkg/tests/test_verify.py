"""The verification suites themselves: registry, determinism, reports."""
import pytest

from chowops import adams_upper, odd_quadric, projective_space
from chowops.ktheory import k0_generator_bundles
from chowops.verify import SUITES, default_builders, run_suite

LIGHT_PARAMS = {
    "whitney": {"trials": 5},
    "lift-independence": {"trials": 5},
}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes(name):
    report = run_suite(name, seed=1, **LIGHT_PARAMS.get(name, {}))
    assert report["passed"], report["failures"][:2]
    assert report["checks"] > 0
    assert report["suite"] == name


def test_whitney_full_trial_count():
    # the stated quantifier: at least 100 random sums per builder variety
    report = run_suite("whitney", seed=0, trials=100)
    assert report["passed"]
    assert report["checks"] >= 100 * len(default_builders())


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("no-such-suite")


def test_reports_are_seed_deterministic():
    a = run_suite("lift-independence", seed=9, trials=10, variety="P^2")
    b = run_suite("lift-independence", seed=9, trials=10, variety="P^2")
    assert a == b


def test_failures_are_serialized(monkeypatch):
    import chowops.verify as V

    monkeypatch.setitem(V.SUITES, "lucas-oracle",
                        lambda r, params: r.check(False, reason="forced"))
    report = run_suite("lucas-oracle")
    assert not report["passed"]
    assert report["failures"] == [{"reason": "forced"}]


def test_suite_params_narrow_the_quantifier():
    wide = run_suite("s0")
    narrow = run_suite("s0", variety="P^1", p=2)
    assert narrow["passed"] and narrow["checks"] < wide["checks"]


def test_adams_upper_ring_map_on_all_basis_pairs():
    for X in (projective_space(2), odd_quadric(3)):
        gens = k0_generator_bundles(X)
        for p in (2, 3):
            for _, a in gens:
                for _, b in gens:
                    assert adams_upper(a * b, p).ch == \
                        (adams_upper(a, p) * adams_upper(b, p)).ch
