"""Characteristic classes: worked examples, Whitney sums, integrality."""
import random
from fractions import Fraction

import pytest

from chowops import (
    SeriesSpec,
    VirtualBundle,
    chern,
    line_bundle,
    make_class,
    multiplicative_class,
    odd_quadric,
    projective_space,
    tangent_bundle,
    theta_p,
    todd,
    trivial_bundle,
    w_chp,
)
from chowops.errors import IntegralityViolation, NonInvertibleSeries
from chowops.verify import random_bundle


P1 = projective_space(1)
P2 = projective_space(2)


def _cls(X, coeffs):
    return make_class(X, coeffs, rational=True)


def test_todd_examples():
    assert todd(trivial_bundle(P2, 0)) == P2.unit(rational=True)
    assert todd(tangent_bundle(P1)) == _cls(P1, {"h^0": 1, "h^1": 1})
    assert todd(-tangent_bundle(P1)) == _cls(P1, {"h^0": 1, "h^1": -1})
    assert todd(tangent_bundle(P2)) == \
        _cls(P2, {"h^0": 1, "h^1": Fraction(3, 2), "h^2": 1})


def test_chern_examples():
    assert chern(line_bundle(P2, 1)) == make_class(P2, {"h^0": 1, "h^1": 1})
    assert chern(tangent_bundle(P2)) == \
        make_class(P2, {"h^0": 1, "h^1": 3, "h^2": 3})
    assert chern(trivial_bundle(P2, 0)) == P2.unit()


def test_theta_examples():
    assert theta_p(trivial_bundle(P1, 3), 2) == P1.unit(rational=True).scale(8)
    assert theta_p(line_bundle(P1, 1), 2) == _cls(P1, {"h^0": 2, "h^1": -1})
    assert theta_p(-tangent_bundle(P1), 2) == \
        _cls(P1, {"h^0": Fraction(1, 2), "h^1": Fraction(1, 2)})
    # negative rank gives the honest p^rank constant
    assert theta_p(trivial_bundle(P1, -2), 3) == \
        P1.unit(rational=True).scale(Fraction(1, 9))


def test_w_examples():
    assert w_chp(line_bundle(P2, 1), 2) == make_class(P2, {"h^0": 1, "h^1": -1})
    assert w_chp(-tangent_bundle(P2), 2) == \
        make_class(P2, {"h^0": 1, "h^1": 3, "h^2": 6})
    assert w_chp(tangent_bundle(P2), 3) == make_class(P2, {"h^0": 1, "h^2": 3})


def test_multiplicative_identity_series():
    ones = SeriesSpec([1])
    for e in (tangent_bundle(P2), line_bundle(P2, -2), trivial_bundle(P2, 5)):
        assert multiplicative_class(ones, e) == P2.unit(rational=True)


def test_series_spec_needs_unit_constant():
    with pytest.raises(NonInvertibleSeries):
        SeriesSpec([0, 1])
    with pytest.raises(ValueError):
        SeriesSpec([1], mode="additive")


def test_chern_integrality_assertion():
    corrupt = VirtualBundle(
        P2, 1, _cls(P2, {"h^0": 1, "h^1": Fraction(1, 3)}), integral=True)
    with pytest.raises(IntegralityViolation):
        chern(corrupt)
    # the same data declared rational is fine
    ok = VirtualBundle(P2, 1, _cls(P2, {"h^0": 1, "h^1": Fraction(1, 3)}),
                       integral=False)
    assert chern(ok).coeffs["h^1"] == Fraction(1, 3)


def test_virtual_bundle_rank_consistency():
    with pytest.raises(ValueError):
        VirtualBundle(P2, 2, _cls(P2, {"h^0": 1}))


def test_primality_is_enforced():
    for bad in (4, 6, 1, 0, -3):
        with pytest.raises(ValueError):
            theta_p(tangent_bundle(P2), bad)
        with pytest.raises(ValueError):
            w_chp(tangent_bundle(P2), bad)


def test_whitney_sums_fixed_cases():
    for X in (P2, odd_quadric(3)):
        e = tangent_bundle(X)
        f = line_bundle(X, 2) + line_bundle(X, -1)
        assert todd(e + f) == todd(e) * todd(f)
        assert chern(e + f) == chern(e) * chern(f)
        for p in (2, 3):
            assert theta_p(e + f, p) == theta_p(e, p) * theta_p(f, p)
            assert w_chp(e + f, p) == w_chp(e, p) * w_chp(f, p)


def test_theta_inverse_law():
    rng = random.Random(7)
    for X in (P1, P2, odd_quadric(3)):
        for _ in range(25):
            e = random_bundle(X, rng)
            assert theta_p(e, 2) * theta_p(-e, 2) == X.unit(rational=True)


def test_w2_is_alternating_total_chern():
    rng = random.Random(11)
    for X in (P2, odd_quadric(3)):
        for _ in range(25):
            e = random_bundle(X, rng)
            c = chern(e)
            alt = X.zero()
            for i in range(X.dim + 1):
                alt = alt + c.codim_component(i).scale((-1) ** i)
            assert w_chp(e, 2) == alt


def test_bundle_json_round_trip():
    e = tangent_bundle(P2) + trivial_bundle(P2, 1)
    blob = e.to_json()
    assert blob == {"rank": "3", "ch": {"1": "3", "h^1": "3", "h^2": "3/2"}}
    back = VirtualBundle.from_json(P2, blob)
    assert back == e


def test_bundle_arithmetic():
    e = line_bundle(P2, 1)
    f = line_bundle(P2, -1)
    assert (e * f).ch == P2.unit(rational=True)  # O(1) tensor O(-1) = O
    assert (e + f).rank == 2
    assert (-e).rank == -1
    assert e.scale(3).rank == 3
