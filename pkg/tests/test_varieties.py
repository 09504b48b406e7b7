"""Builders and the morphism catalog, cross-checked against sympy series."""
from fractions import Fraction

import pytest

import oracles
from chowops import (
    build_morphism,
    degree,
    external_product,
    hyperplane_class,
    line_bundle,
    make_class,
    morphism_from_spec,
    odd_quadric,
    product,
    projective_space,
    pullback,
    pushforward,
    variety_from_spec,
)
from chowops.core import ModPClass
from chowops.errors import (
    EvenDimensionUnsupported,
    FlagViolation,
    IncompatibleDimensions,
    UnknownKind,
    VarietyMismatch,
)
from chowops.varieties import Morphism


# -- projective spaces -------------------------------------------------------

def test_p1_tau_is_one_plus_h():
    P1 = projective_space(1)
    assert P1.tau_class("h^0") == make_class(P1, {"h^0": 1, "h^1": 1},
                                             rational=True)


def test_p2_data_matches_worked_values():
    P2 = projective_space(2)
    assert P2.tau_class("h^1") == make_class(P2, {"h^1": 1, "h^2": 1},
                                             rational=True)
    assert P2.tangent_chern_character() == make_class(
        P2, {"h^0": 2, "h^1": 3, "h^2": Fraction(3, 2)}, rational=True)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_pn_tau_columns_against_sympy(n):
    X = projective_space(n)
    for j in range(n + 1):
        expected = oracles.h_powers_on_pn(X, oracles.pn_tau_column(n, j))
        assert X.tau_class("h^%d" % j) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_pn_tangent_against_sympy(n):
    X = projective_space(n)
    assert X.tangent_chern_character() == \
        oracles.h_powers_on_pn(X, oracles.pn_tangent(n))


def test_pn_cell_structure():
    X = projective_space(3)
    assert X.cells == [("h^0", 3), ("h^1", 2), ("h^2", 1), ("h^3", 0)]
    assert X.fundamental == "h^0"
    assert X.degree_vector == {"h^3": 1}


# -- odd quadrics -------------------------------------------------------------

def test_quadric_rejects_even_dimension():
    with pytest.raises(EvenDimensionUnsupported):
        odd_quadric(4)


def test_q3_basis_and_degrees():
    Q3 = odd_quadric(3)
    assert Q3.cells == [("h^0", 3), ("h^1", 2), ("l_1", 1), ("l_0", 0)]
    assert degree(make_class(Q3, {"l_0": 1})) == 1
    assert Q3.tangent_ch["h^0"] == 3  # rank equals dimension


def test_q3_tau_of_embedded_line():
    Q3 = odd_quadric(3)
    assert Q3.tau_class("l_1") == make_class(Q3, {"l_1": 1, "l_0": 1},
                                             rational=True)


@pytest.mark.parametrize("d", [1, 3, 5, 7])
def test_quadric_h_columns_against_sympy(d):
    X = odd_quadric(d)
    m = (d - 1) // 2
    for i in range(m + 1):
        expected = oracles.h_powers_on_quadric(
            X, oracles.quadric_tau_column_h(d, i))
        assert X.tau_class("h^%d" % i) == expected


@pytest.mark.parametrize("d", [1, 3, 5, 7])
def test_quadric_tangent_against_sympy(d):
    X = odd_quadric(d)
    assert X.tangent_chern_character() == \
        oracles.h_powers_on_quadric(X, oracles.quadric_tangent(d))


def test_quadric_l_columns_push_todd_from_linear_subspace():
    Q5 = odd_quadric(5)
    f = build_morphism("linear_in_quadric", j=2, d=5)
    P2 = projective_space(2)
    todd_p2 = P2.tau_class("h^0")
    assert Q5.tau_class("l_2") == f.push_class(todd_p2)


# -- products ------------------------------------------------------------------

def test_p1xp1_kunneth_basis():
    XY = product(projective_space(1), projective_space(1))
    assert sorted(XY.labels()) == ["h^0*h^0", "h^0*h^1", "h^1*h^0", "h^1*h^1"]
    assert XY.dim == 2
    assert XY.fundamental == "h^0*h^0"


def test_external_product_of_basis_cells():
    P1 = projective_space(1)
    h = make_class(P1, {"h^1": 1})
    one = P1.unit()
    assert external_product(h, one).coeffs == {"h^1*h^0": 1}


def test_tau_of_point_times_line():
    P1 = projective_space(1)
    XY = product(P1, P1)
    got = XY.tau_class("h^1*h^0")
    assert got == make_class(XY, {"h^1*h^0": 1, "h^1*h^1": 1}, rational=True)


def test_degree_kunneth_for_points():
    P1, P2_ = projective_space(1), projective_space(2)
    x = make_class(P1, {"h^1": 2})
    y = make_class(P2_, {"h^2": 3})
    assert degree(external_product(x, y)) == 6


def test_triple_product_folds():
    X = variety_from_spec({"type": "product", "factors": [
        {"type": "projective_space", "n": 1},
        {"type": "projective_space", "n": 1},
        {"type": "projective_space", "n": 1}]})
    assert X.dim == 3
    assert len(X.cells) == 8


# -- morphism catalog ----------------------------------------------------------

def test_linear_embedding_matrices():
    f = build_morphism("linear_embedding", m=1, n=2)
    P1, P2 = f.source, f.target
    assert pushforward(f, make_class(P1, {"h^1": 1})) == \
        make_class(P2, {"h^2": 1})
    assert pushforward(f, P1.unit()) == make_class(P2, {"h^1": 1})
    assert pullback(f, make_class(P2, {"h^1": 1})) == make_class(P1, {"h^1": 1})


def test_veronese_pull_and_push():
    f = build_morphism("veronese", n=1, deg=2)
    assert f.target.name == "P^2"
    P1 = f.source
    assert pullback(f, make_class(f.target, {"h^1": 1})) == \
        make_class(P1, {"h^1": 2})
    f3 = build_morphism("veronese", n=1, deg=3)
    assert pullback(f3, make_class(f3.target, {"h^1": 1})) == \
        make_class(P1, {"h^1": 3})
    # the quadratic Veronese surface has degree 4
    v2 = build_morphism("veronese", n=2, deg=2)
    assert v2.target.name == "P^5"
    assert pushforward(v2, v2.source.unit()).coeffs == {"h^3": 4}


def test_quadric_embedding_push():
    f = build_morphism("quadric_in_projective", d=3)
    Q3, P4 = f.source, f.target
    assert pushforward(f, make_class(Q3, {"h^1": 1})) == \
        make_class(P4, {"h^2": 2})
    assert pushforward(f, make_class(Q3, {"l_1": 1})) == \
        make_class(P4, {"h^3": 1})
    assert pullback(f, make_class(P4, {"h^3": 1})) == \
        make_class(Q3, {"l_0": 2})


def test_self_map_of_p1():
    f = build_morphism("pn_self_map", degree=3)
    P1 = f.source
    assert pullback(f, make_class(P1, {"h^1": 1})) == make_class(P1, {"h^1": 3})
    assert pushforward(f, P1.unit()) == P1.unit().scale(3)
    assert pushforward(f, make_class(P1, {"h^1": 1})) == \
        make_class(P1, {"h^1": 1})
    assert f.map_degree() == 3


def test_product_projection():
    P1, P2 = projective_space(1), projective_space(2)
    f = build_morphism("product_projection", factors=(P1, P2), onto=0)
    XY = f.source
    assert f.target is P1
    assert pullback(f, make_class(P1, {"h^1": 1})).coeffs == {"h^1*h^0": 1}
    # only classes with zero-dimensional second factor survive
    assert pushforward(f, make_class(XY, {"h^1*h^2": 1})).coeffs == {"h^1": 1}
    assert pushforward(f, make_class(XY, {"h^1*h^1": 1})).is_zero()


def test_pushforward_preserves_point_degree():
    from chowops.verify import standard_morphisms
    for f in standard_morphisms():
        for label in f.source.points:
            pt = f.source.basis_class(label)
            assert degree(pushforward(f, pt)) == degree(pt)


def test_morphism_t_f_ranks():
    f = build_morphism("linear_embedding", m=1, n=3)
    assert f.T_f.rank == -2
    g = build_morphism("quadric_in_projective", d=3)
    assert g.T_f.rank == -1
    h = build_morphism("pn_self_map", degree=2)
    assert h.T_f.rank == 0
    assert h.T_f.ch == make_class(h.source, {"h^1": -2}, rational=True)


def test_unknown_kind_and_bad_params():
    with pytest.raises(UnknownKind):
        build_morphism("blowup", center=0)
    with pytest.raises(IncompatibleDimensions):
        build_morphism("linear_in_quadric", j=2, d=3)
    with pytest.raises(IncompatibleDimensions):
        build_morphism("linear_embedding", m=3, n=1)


def test_flag_violations():
    f = build_morphism("linear_embedding", m=1, n=2)
    fake = Morphism("fake", f.source, f.target, f.push, f.pull,
                    proper=False, lci=False, flat=False)
    with pytest.raises(FlagViolation):
        pushforward(fake, f.source.unit())
    with pytest.raises(FlagViolation):
        pullback(fake, f.target.unit())


def test_push_pull_variety_checks():
    f = build_morphism("linear_embedding", m=1, n=2)
    with pytest.raises(VarietyMismatch):
        pushforward(f, projective_space(3).unit())


def test_morphisms_apply_to_modp_classes():
    f = build_morphism("quadric_in_projective", d=3)
    xbar = ModPClass(f.source, 2, {"h^1": 1})
    assert f.push_class(xbar) == ModPClass(f.target, 2, {})  # 2 h^2 = 0 mod 2
    ybar = ModPClass(f.target, 2, {"h^1": 1})
    assert f.pull_class(ybar) == ModPClass(f.source, 2, {"h^1": 1})


def test_identity_via_degenerate_catalog_entries():
    ident = build_morphism("linear_embedding", m=2, n=2)
    P2 = ident.source
    x = make_class(P2, {"h^1": 5})
    assert pushforward(ident, x) == x
    assert pullback(ident, x) == x
    assert ident.T_f.rank == 0 and ident.T_f.ch == P2.zero(rational=True)


def test_line_bundle_and_hyperplane():
    Q3 = odd_quadric(3)
    o2 = line_bundle(Q3, 2)
    assert o2.rank == 1
    assert o2.ch.coeffs["h^1"] == 2
    assert hyperplane_class(odd_quadric(1)).coeffs == {"l_0": 2}


def test_variety_from_spec_shorthand_and_json():
    assert variety_from_spec("P^3").name == "P^3"
    assert variety_from_spec("Q_5").name == "Q_5"
    assert variety_from_spec("P^1xP^2").name == "P^1xP^2"
    assert variety_from_spec({"type": "odd_quadric", "dim": 3}).name == "Q_3"
    with pytest.raises(ValueError):
        variety_from_spec({"type": "grassmannian", "k": 2, "n": 4})
    with pytest.raises(ValueError):
        variety_from_spec("P^7", max_dim=5)


def test_morphism_from_spec():
    f = morphism_from_spec({"kind": "veronese", "n": 1, "deg": 2})
    assert f.source.name == "P^1" and f.target.name == "P^2"
    g = morphism_from_spec({"kind": "pn_self_map", "degree": 5})
    assert g.map_degree() == 5


def test_builders_are_interned():
    assert projective_space(2) is projective_space(2)
    assert odd_quadric(3) is odd_quadric(3)
    P1 = projective_space(1)
    assert product(P1, P1) is product(P1, P1)


def test_projection_from_json_spec():
    f = morphism_from_spec({
        "kind": "product_projection",
        "factors": [{"type": "projective_space", "n": 1},
                    {"type": "projective_space", "n": 2}],
        "onto": 1})
    assert f.source.name == "P^1xP^2" and f.target.name == "P^2"
    assert f is morphism_from_spec({
        "kind": "product_projection",
        "factors": ["P^1", "P^2"], "onto": 1})


def test_registry_is_append_only():
    from chowops import registered_morphisms
    before = registered_morphisms()
    f = build_morphism("pn_self_map", degree=7)
    after = registered_morphisms()
    assert len(after) == len(before) + 1 and after[-1] is f
    assert build_morphism("pn_self_map", degree=7) is f
    assert len(registered_morphisms()) == len(after)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        make_class(P2 := projective_space(2), {"h^1": 0.5})
    with pytest.raises(TypeError):
        projective_space(2).unit().scale(0.5)
