"""Reduced Steenrod operations via the p-adic decomposition of psi_p.

The central routine extracts, from the tau-vector of the homological Adams
operation of an integral lift, integral classes x_k of filtration level at
most d - k(p-1) such that psi_p(x) = sum_k p^{-d-k} x_k exactly.  Degrees are
processed top-down; at dimension j the exponent schedule is
k(j) = [(d - j)/(p - 1)], the residual component is multiplied by p^{d+k(j)},
checked to be an integral Chow class, lifted canonically through the cell
basis, and its full tau-vector is subtracted.  The operations on mod-p Chow
groups read off the dimension-(d - k(p-1)) components of the x_k.
"""
from fractions import Fraction

from .char_classes import w_tangent
from .core import ModPClass, class_to_json, degree
from .errors import (
    DimensionMismatch,
    ExtractionFailure,
    FlagViolation,
    LevelViolation,
    NonIntegralInput,
    require_prime,
)
from .ktheory import (
    KClass,
    adams_lower,
    euler_char,
    filtration_level,
    k0_from_chow_lift,
    structure_sheaf,
)


class AtiyahDecomposition:
    """psi_p(x) = sum_k p^{-d-k} x_k with level(x_k) <= d - k(p-1)."""

    def __init__(self, x, p, level, parts):
        self.x = x
        self.p = p
        self.level = level
        self.parts = parts

    def reconstruction(self):
        """The right-hand side sum, for the exactness check."""
        X = self.x.variety
        out = X.zero(rational=True)
        for k, part in enumerate(self.parts):
            out = out + part.tau.scale(Fraction(1, self.p ** (self.level + k)))
        return out

    def verify(self):
        assert self.reconstruction() == adams_lower(self.x, self.p).tau, \
            "reconstruction identity failed"
        top = (self.parts[0].tau - self.x.tau).dim_component(self.level)
        assert top.is_zero(), "x_0 differs from x at the top level"
        for k, part in enumerate(self.parts):
            if not part.is_zero():
                assert filtration_level(part) <= self.level - k * (self.p - 1)
        return True


def atiyah_decompose(x, p, level=None):
    """Greedy top-down p-adic extraction of psi_p(x).

    level defaults to the filtration level of x and may be passed explicitly
    (it must be at least the actual level; steenrod operations use the degree
    of the mod-p input so that perturbed lifts of lower level still decompose
    against the same schedule).
    """
    require_prime(p)
    if not x.integral:
        raise NonIntegralInput("Atiyah decomposition needs an integral class")
    X = x.variety
    d = filtration_level(x) if level is None else level
    if not x.is_zero() and filtration_level(x) > d:
        raise LevelViolation("class has level %d > %d"
                             % (filtration_level(x), d))
    K = d // (p - 1)
    W = adams_lower(x, p).tau
    if W.top_dim() is not None and W.top_dim() > d:
        raise ExtractionFailure(
            "psi_%d output has support above the filtration level" % p,
            details={"variety": X.name, "p": p, "tau": class_to_json(W)})

    parts = [KClass(X, X.zero(rational=True), integral=True)
             for _ in range(K + 1)]
    for j in range(d, -1, -1):
        k = (d - j) // (p - 1)
        piece = W.dim_component(j).scale(Fraction(p) ** (d + k))
        if piece.is_zero():
            continue
        if not piece.is_integral():
            raise ExtractionFailure(
                "dimension-%d component of p^%d psi_%d is not integral"
                % (j, d + k, p),
                details={"variety": X.name, "p": p, "dimension": j,
                         "exponent": d + k, "component": class_to_json(piece),
                         "input": class_to_json(x.tau)})
        L = k0_from_chow_lift(piece.as_integral())
        parts[k] = parts[k] + L
        W = W - L.tau.scale(Fraction(1, p ** (d + k)))
    if not W.is_zero():
        raise ExtractionFailure("nonzero residual after extraction",
                                details={"variety": X.name, "p": p,
                                         "residual": class_to_json(W)})
    dec = AtiyahDecomposition(x, p, d, parts)
    top = (parts[0].tau - x.tau).dim_component(d)
    if not top.is_zero():
        raise ExtractionFailure("x_0 does not agree with x at the top level",
                                details={"variety": X.name, "p": p})
    return dec


def _as_modp(x, p):
    if isinstance(x, ModPClass):
        if p is not None and p != x.p:
            raise ValueError("class is mod %d, not mod %s" % (x.p, p))
        return x, x.p
    if p is None:
        raise ValueError("p is required for an integral input")
    return ModPClass.from_integral(x, p), p


def steenrod_homological(x, p=None, lift=None):
    """S-bar^X_k on mod-p Chow groups; k-th entry lowers dimension by k(p-1).

    Mixed-dimension inputs are processed componentwise.  `lift` replaces the
    canonical integral lift (homogeneous inputs only); it must be an integral
    K-class of level at most the input dimension.
    """
    x, p = _as_modp(x, p)
    require_prime(p)
    X = x.variety
    if x.is_zero():
        return [ModPClass(X, p, {})]
    dims = x.support_dims()
    if lift is not None and len(dims) > 1:
        raise ValueError("an explicit lift needs a homogeneous input")
    n_ops = max(d // (p - 1) for d in dims) + 1
    out = [ModPClass(X, p, {}) for _ in range(n_ops)]
    for d in dims:
        if lift is None:
            L = k0_from_chow_lift(x.dim_component(d).lift())
        else:
            L = lift
            if not L.integral:
                raise NonIntegralInput("lift must be integral")
            if not L.is_zero() and filtration_level(L) > d:
                raise LevelViolation("lift has level above the input dimension")
        if L.is_zero():
            continue
        dec = atiyah_decompose(L, p, level=d)
        for k, part in enumerate(dec.parts):
            comp = part.tau.dim_component(d - k * (p - 1))
            if not comp.is_zero():
                out[k] = out[k] + ModPClass.from_integral(comp.as_integral(), p)
    return out


def _w_tangent_modp(X, p):
    key = ("w_T_modp", p)
    if key not in X._cache:
        X._cache[key] = ModPClass.from_integral(w_tangent(X, p), p)
    return X._cache[key]


def steenrod_cohomological(x, p=None):
    """S-bar_X = w^{CH,p}(T_X) composed with the homological operation."""
    x, p = _as_modp(x, p)
    X = x.variety
    if x.is_zero():
        return [ModPClass(X, p, {})]
    w = _w_tangent_modp(X, p)
    dims = x.support_dims()
    n_ops = max(d // (p - 1) for d in dims) + 1
    out = [ModPClass(X, p, {}) for _ in range(n_ops)]
    for d in dims:
        hom = steenrod_homological(x.dim_component(d), p)
        tot = ModPClass(X, p, {})
        for part in hom:
            tot = tot + part
        twisted = w * tot
        for k in range(n_ops):
            out[k] = out[k] + twisted.dim_component(d - k * (p - 1))
    return out


def steenrod_total(ops):
    """Sum of all graded components of an operation table."""
    out = None
    for part in ops:
        out = part if out is None else out + part
    return out


def op_component(ops, k):
    """k-th entry of an operation list, zero beyond the computed range."""
    if k < len(ops):
        return ops[k]
    first = ops[0]
    return ModPClass(first.variety, first.p, {})


def steenrod_operation(x, p=None, convention="cohomological", lift=None):
    if convention in ("cohomological", "coh"):
        if lift is not None:
            raise ValueError("explicit lifts apply to the homological operation")
        return steenrod_cohomological(x, p)
    if convention in ("homological", "hom"):
        return steenrod_homological(x, p, lift=lift)
    raise ValueError("convention must be cohomological or homological")


# ---------------------------------------------------------------------------
# divisibility of characteristic numbers, degree formulas
# ---------------------------------------------------------------------------

def segre_number(X, p):
    """deg of the dim-0 part of w^{CH,p}(-T_X) when dim X = k(p-1); divisible by p."""
    require_prime(p)
    if X.dim <= 0 or X.dim % (p - 1) != 0:
        raise DimensionMismatch(
            "dim %s = %d is not a positive multiple of %d"
            % (X.name, X.dim, p - 1))
    from .char_classes import w_minus_tangent
    val = degree(w_minus_tangent(X, p).dim_component(0))
    val = int(val)
    assert val % p == 0, ("Segre-type number %d of %s is not divisible by %d"
                          % (val, X.name, p))
    return val


def degree_formula_witness(x, p):
    """Zero-cycle in Z_(p) x CH_0 of degree lambda * p^[d/(p-1)] * deg(x).

    Runs the degree-formula recursion; lambda is returned explicitly
    as the accumulated product of the (p^e - 1) units, and the degree
    identity is asserted exactly before returning.
    """
    require_prime(p)
    if not x.integral:
        raise NonIntegralInput("degree formula needs an integral class")
    X = x.variety
    if x.is_zero():
        return X.zero(rational=True), Fraction(1)
    d = filtration_level(x)
    degx = euler_char(x)
    if d == 0:
        return x.tau.dim_component(0), Fraction(1)

    E = d // (p - 1)
    dec = atiyah_decompose(x, p)
    pieces = [(dec.parts[0] - x, 0)]
    pieces += [(part, k) for k, part in enumerate(dec.parts) if k >= 1]

    witnesses = []
    lam = Fraction(1)
    for piece, k in pieces:
        if piece.is_zero():
            continue
        c, sub_lam = degree_formula_witness(piece, p)
        witnesses.append((c, sub_lam, k, filtration_level(piece) // (p - 1)))
        lam *= sub_lam
    total = X.zero(rational=True)
    for c, sub_lam, k, sub_E in witnesses:
        total = total + c.scale((lam / sub_lam) * Fraction(p) ** (E - k - sub_E))
    lam_final = lam * (p ** d - 1)

    got = Fraction(degree(total))
    assert got == lam_final * Fraction(p) ** E * degx, \
        "degree identity failed on %s" % X.name
    assert lam_final.numerator % p and lam_final.denominator % p, \
        "lambda is not a p-adic unit"
    for v in total.coeffs.values():
        assert Fraction(v).denominator % p, "witness left Z_(p)"
    return total, lam_final


def chi_defect(f, p):
    """chi(O_X) - (deg f) chi(O_Y) as the degree of a level <= d-1 class.

    Returns the defect together with the witness zero-cycle exhibiting
    lambda * p^[(d-1)/(p-1)] * defect as a degree on the target.
    """
    require_prime(p)
    if not f.proper:
        raise FlagViolation("chi defect needs a proper morphism")
    X, Y = f.source, f.target
    if X.dim != Y.dim:
        raise DimensionMismatch("chi defect compares equal dimensions")
    d = X.dim
    deg_f = f.map_degree()
    tau_delta = f.push_class(structure_sheaf(X).tau) - \
        structure_sheaf(Y).tau.scale(deg_f)
    delta = KClass(Y, tau_delta, integral=True)
    if not delta.is_zero() and filtration_level(delta) > d - 1:
        raise LevelViolation("f_*[O_X] - (deg f)[O_Y] has full level")
    defect = euler_char(structure_sheaf(X)) - deg_f * euler_char(structure_sheaf(Y))
    assert defect == euler_char(delta), "chi bookkeeping failed"

    exponent = (d - 1) // (p - 1) if d >= 1 else 0
    witness, lam = degree_formula_witness(delta, p)
    if not delta.is_zero():
        sub_E = filtration_level(delta) // (p - 1)
        witness = witness.scale(Fraction(p) ** (exponent - sub_E))
    wdeg = Fraction(degree(witness))
    assert wdeg == lam * Fraction(p) ** exponent * defect, \
        "witness degree mismatch"
    return {
        "defect": int(defect),
        "degree_of_map": deg_f,
        "delta_level": None if delta.is_zero() else filtration_level(delta),
        "exponent": exponent,
        "witness": witness,
        "lambda": lam,
        "witness_degree": wdeg,
    }
