"""K_0 in tau-coordinates: lattices, the topological filtration, Adams operations.

A K-class is stored as its Riemann-Roch image tau(x) in CH(X) tensor Q.  The
integral lattice is spanned by the tau_matrix columns (structure sheaves of
cell closures); membership is decidable by back-substitution because the
matrix is triangular with unit diagonal.  On the smooth builders K_0 and K^0
are identified by multiplying or dividing by Todd(T_X).
"""
from fractions import Fraction

from .char_classes import (
    VirtualBundle,
    theta_minus_tangent,
    theta_p,
    todd_class,
    todd_inv_class,
    w_chp,
)
from .core import ChowClass, class_from_json, class_to_json, degree
from .errors import (
    DecompositionFailure,
    FlagViolation,
    NonIntegralInput,
    ZeroClass,
    require_prime,
)


class KClass:
    """Element of K_0(X) (or its p-localization) in tau-coordinates."""

    __slots__ = ("variety", "tau", "integral")

    def __init__(self, variety, tau, integral):
        if tau.variety is not variety:
            raise ValueError("tau lives on the wrong variety")
        self.variety = variety
        self.tau = ChowClass(variety, tau.coeffs, rational=True)
        self.integral = integral

    def is_zero(self):
        return self.tau.is_zero()

    def __add__(self, other):
        if self.variety is not other.variety:
            raise ValueError("K-classes on different varieties")
        return KClass(self.variety, self.tau + other.tau,
                      self.integral and other.integral)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        integral = self.integral and isinstance(c, int)
        return KClass(self.variety, self.tau.scale(c), integral)

    def __eq__(self, other):
        if not isinstance(other, KClass):
            return NotImplemented
        return self.variety is other.variety and self.tau == other.tau

    def __repr__(self):
        return "KClass(%s: tau=%r, integral=%s)" % (
            self.variety.name, self.tau.coeffs, self.integral)

    def to_json(self):
        return {"tau": class_to_json(self.tau), "integral": self.integral}


def kclass_from_json(X, obj):
    tau = class_from_json(X, obj.get("tau", {}), rational=True)
    integral = bool(obj.get("integral", False))
    if integral and not lattice_membership(TauLattice(X), tau):
        raise NonIntegralInput("tau vector declared integral is not in the "
                               "tau-lattice")
    return KClass(X, tau, integral)


class TauLattice:
    """The integral lattice spanned by the tau_matrix columns."""

    def __init__(self, variety):
        self.variety = variety
        # solve order: strictly decreasing cell dimension
        self.order = sorted(variety.labels(),
                            key=lambda l: -variety.cell_dim(l))

    def coordinates(self, cls):
        """Back-substitute: coefficients of cls in the column basis."""
        work = {l: Fraction(v) for l, v in cls.coeffs.items()}
        coords = {}
        for label in self.order:
            v = work.pop(label, Fraction(0))
            if not v:
                continue
            coords[label] = v
            for r, c in self.variety.tau_columns[label].items():
                if r == label:
                    continue
                nv = work.get(r, Fraction(0)) - v * c
                if nv:
                    work[r] = nv
                else:
                    work.pop(r, None)
        assert not work, "triangular solve left a residue"
        return coords

    def membership(self, cls):
        return all(v.denominator == 1 for v in self.coordinates(cls).values())


def tau_lattice(X):
    if "tau_lattice" not in X._cache:
        X._cache["tau_lattice"] = TauLattice(X)
    return X._cache["tau_lattice"]


def lattice_membership(L, v):
    """True iff v lies in the integer span of the lattice columns."""
    if not isinstance(v, ChowClass):
        v = ChowClass(L.variety, dict(v), rational=True)
    return L.membership(v)


def k0_from_chow_lift(x):
    """Canonical lift through phi: sum of x_beta * tau[O_{Z_beta}]."""
    if not x.is_integral():
        raise NonIntegralInput("canonical lift needs an integral Chow class")
    X = x.variety
    tau = X.zero(rational=True)
    for label, v in x.coeffs.items():
        tau = tau + X.tau_class(label).scale(int(v))
    return KClass(X, tau, integral=True)


def structure_sheaf(X):
    """[O_X], the lift of the fundamental class."""
    return k0_from_chow_lift(X.unit())


def k0_generators(X):
    """Lattice generators [O_{Z_beta}] indexed by cell label."""
    return [(label, k0_from_chow_lift(X.basis_class(label)))
            for label in X.labels()]


def filtration_level(x):
    """Largest homological degree with a nonzero tau-component."""
    if x.is_zero():
        raise ZeroClass("the zero class has no filtration level")
    return x.tau.top_dim()


def phi_top(x):
    """Top graded piece of an integral K-class, as an integral Chow class."""
    if not x.integral:
        raise NonIntegralInput("phi_top needs an integral K-class")
    if x.is_zero():
        return x.variety.zero()
    d = filtration_level(x)
    return x.tau.dim_component(d).as_integral()


def euler_char(x):
    """deg of the dimension-0 part of tau: chi of the pushforward to a point."""
    return Fraction(degree(x.tau.dim_component(0)))


# ---------------------------------------------------------------------------
# Adams operations
# ---------------------------------------------------------------------------

def adams_upper(y, p):
    """psi^p on K^0: scales the codim-i Chern character component by p^i."""
    require_prime(p)
    X = y.variety
    ch = ChowClass(X, {l: v * p ** X.cell_codim(l)
                       for l, v in y.ch.coeffs.items()}, rational=True)
    return VirtualBundle(X, y.rank, ch, integral=y.integral)


def _psi_twist(X, p):
    # Todd(T_X) * ch(theta^p(-T_X)): constant per (variety, prime)
    key = ("psi_twist", p)
    if key not in X._cache:
        X._cache[key] = todd_class(X) * theta_minus_tangent(X, p)
    return X._cache[key]


def adams_lower(x, p):
    """Homological Adams operation on a smooth variety, in tau-coordinates.

    Writes ch(y) = tau(x) / Todd(T_X), scales codim-i components by p^i, and
    multiplies back by Todd(T_X) * theta^p(-T_X).  On K_0(point) this is the
    identity.
    """
    require_prime(p)
    X = x.variety
    ch_y = x.tau * todd_inv_class(X)
    scaled = ChowClass(X, {l: v * p ** X.cell_codim(l)
                           for l, v in ch_y.coeffs.items()}, rational=True)
    return KClass(X, _psi_twist(X, p) * scaled, integral=False)


def kclass_to_bundle(x):
    """Identify K_0 with K^0 on a regular variety: divide tau by Todd."""
    ch = x.tau * todd_inv_class(x.variety)
    rank_frac = Fraction(ch.coeffs.get(x.variety.fundamental, 0))
    assert rank_frac.denominator == 1
    return VirtualBundle(x.variety, int(rank_frac), ch, integral=x.integral)


def bundle_to_kclass(e):
    """e . [O_X]: multiply the Chern character by Todd."""
    return KClass(e.variety, e.ch * todd_class(e.variety), integral=e.integral)


def k0_generator_bundles(X):
    """The K^0 images of the lattice generators (ch = tau column / Todd)."""
    return [(label, kclass_to_bundle(k))
            for label, k in k0_generators(X)]


# ---------------------------------------------------------------------------
# morphism action in tau-coordinates
# ---------------------------------------------------------------------------

def kclass_pushforward(f, x):
    """tau commutes with proper pushforward."""
    if not f.proper:
        raise FlagViolation("K-theory pushforward needs a proper morphism")
    return KClass(f.target, f.push_class(x.tau), x.integral)


def kclass_pullback(f, y):
    """K^0 pullback written in tau-coordinates: Todd_X * f^*(tau / Todd_Y)."""
    if not (f.lci or f.flat):
        raise FlagViolation("K-theory pullback needs an lci or flat morphism")
    ch = f.pull_class(y.tau * todd_inv_class(f.target))
    return KClass(f.source, todd_class(f.source) * ch, y.integral)


# ---------------------------------------------------------------------------
# Bott decomposition
# ---------------------------------------------------------------------------

def bott_decompose(e, p):
    """theta^p(e) = sum_k p^{rank(e)-k} e_k with e_k in codimension >= k(p-1).

    Greedy extraction from low codimension upward; at each codimension the
    residual is divided by the appropriate power of p, checked to be integral,
    and replaced by the full Chern character of its canonical lattice lift so
    that the rational tail is carried along.  The top-codimension part of each
    e_k is checked against w^{CH,p}_k(e) mod p.
    """
    require_prime(p)
    if not e.integral:
        raise NonIntegralInput("Bott decomposition needs an integral bundle")
    X = e.variety
    K = X.dim // (p - 1)
    theta = theta_p(e, p)
    w = w_chp(e, p)
    tdinv = todd_inv_class(X)

    W = theta
    parts = [X.zero(rational=True) for _ in range(K + 1)]
    tops = [X.zero(rational=True) for _ in range(K + 1)]
    for j in range(X.dim + 1):
        k = min(j // (p - 1), K)
        piece = W.codim_component(j).scale(Fraction(p) ** (k - e.rank))
        if piece.is_zero():
            continue
        if not piece.is_integral():
            raise DecompositionFailure(
                "codim-%d piece of theta^%d is not divisible by %d^%d"
                % (j, p, p, e.rank - k),
                details={"variety": X.name, "p": p, "codim": j,
                         "piece": class_to_json(piece)})
        piece = piece.as_integral()
        lift_ch = k0_from_chow_lift(piece).tau * tdinv
        parts[k] = parts[k] + lift_ch
        if j == k * (p - 1):
            tops[k] = piece
        W = W - lift_ch.scale(Fraction(p) ** (e.rank - k))
    if not W.is_zero():
        raise DecompositionFailure("nonzero residual after extraction",
                                   details={"variety": X.name, "p": p,
                                            "residual": class_to_json(W)})
    for k in range(K + 1):
        support = parts[k].support_dims()
        if support and X.dim - support[-1] < k * (p - 1):
            raise DecompositionFailure(
                "e_%d is supported below codimension %d" % (k, k * (p - 1)))
        diff = tops[k] - w.codim_component(k * (p - 1))
        if any(int(v) % p for v in diff.coeffs.values()):
            raise DecompositionFailure(
                "top part of e_%d differs from w^{CH,%d}_%d mod %d" % (k, p, k, p),
                details={"variety": X.name, "p": p, "k": k,
                         "diff": class_to_json(diff)})
    return parts
