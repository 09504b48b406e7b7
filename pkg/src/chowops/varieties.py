"""Builders for split cellular varieties and the morphism catalog.

All tau-matrix and tangent data for projective spaces and odd quadrics is
expanded in a one-variable truncated series ring and then mapped onto the
cell basis: on Q_d the substitution t -> h is a ring homomorphism because
h^k equals the cell h^k for k <= (d-1)/2 and 2*l_{d-k} above the middle.

Morphisms are finite matrices, not symbolic maps; multiplicativity of the
pullback and the projection formula are checked exhaustively on basis pairs
at registration time.
"""
from fractions import Fraction
from math import comb, factorial

from . import series as S
from .char_classes import VirtualBundle, tangent_bundle
from .core import CellularVariety, ChowClass, ModPClass, make_class
from .errors import (
    EvenDimensionUnsupported,
    FlagViolation,
    IncompatibleDimensions,
    InvalidVariety,
    UnknownKind,
    VarietyMismatch,
)

_VARIETY_CACHE = {}
_MORPHISM_CACHE = {}
_REGISTRY = []


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def projective_space(n):
    """P^n with cells h^0..h^n (codimension i)."""
    if n < 0:
        raise ValueError("projective space needs n >= 0")
    key = ("P", n)
    if key in _VARIETY_CACHE:
        return _VARIETY_CACHE[key]

    cells = [("h^%d" % i, n - i) for i in range(n + 1)]
    table = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            table[("h^%d" % i, "h^%d" % j)] = (
                {"h^%d" % (i + j): 1} if i + j <= n else {})

    tangent = {}
    for k in range(n + 1):
        c = Fraction(n + 1, factorial(k)) - (1 if k == 0 else 0)
        if c:
            tangent["h^%d" % k] = c

    td = S.todd_series(n)
    tau = {}
    for j in range(n + 1):
        col_series = S.spow(td, n - j + 1, n)
        col = {}
        for k in range(n - j + 1):
            if col_series[k]:
                col["h^%d" % (j + k)] = col_series[k]
        tau["h^%d" % j] = col

    X = CellularVariety("P^%d" % n, n, cells, table, {"h^%d" % n: 1},
                        tangent, tau)
    X.hyperplane = {"h^1": 1} if n >= 1 else {}
    _VARIETY_CACHE[key] = X
    return X


def _quadric_h_power(d, k):
    """The class h^k on Q_d as a sparse cell vector."""
    m = (d - 1) // 2
    if k <= m:
        return {"h^%d" % k: 1}
    if k <= d:
        return {"l_%d" % (d - k): 2}
    return {}


def odd_quadric(d):
    """Split quadric of odd dimension d inside P^{d+1}.

    Cells h^0..h^m (linear-section subquadrics, m = (d-1)/2) and l_m..l_0
    (linear subspaces).  The middle relation is h^{m+1} = 2 l_m.
    """
    if d < 1:
        raise ValueError("quadric dimension must be >= 1")
    if d % 2 == 0:
        raise EvenDimensionUnsupported(
            "even-dimensional quadrics need d mod 4 middle-class data")
    key = ("Q", d)
    if key in _VARIETY_CACHE:
        return _VARIETY_CACHE[key]

    m = (d - 1) // 2
    cells = [("h^%d" % i, d - i) for i in range(m + 1)]
    cells += [("l_%d" % j, j) for j in range(m, -1, -1)]

    table = {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            if i == 0:
                continue  # unit products are filled automatically
            table[("h^%d" % i, "h^%d" % j)] = {
                k: v for k, v in _quadric_h_power(d, i + j).items()}
    for i in range(1, m + 1):
        for j in range(m + 1):
            table[("h^%d" % i, "l_%d" % j)] = (
                {"l_%d" % (j - i): 1} if j - i >= 0 else {})
    for i in range(m + 1):
        for j in range(i, m + 1):
            table[("l_%d" % i, "l_%d" % j)] = {}

    def map_series(coeffs):
        out = {}
        for k, c in enumerate(coeffs):
            if not c:
                continue
            for label, mult in _quadric_h_power(d, k).items():
                out[label] = out.get(label, Fraction(0)) + c * mult
        return {l: v for l, v in out.items() if v}

    tangent_series = S.sadd(
        S.sscale(d + 2, S.exp_t(1, d), d),
        S.sscale(-1, S.sadd(S.series([1], d), S.exp_t(2, d), d), d), d)
    tangent = map_series(tangent_series)

    td = S.todd_series(d)
    td2 = [td[k] * 2 ** k for k in range(d + 1)]  # td(2t)
    todd_q = S.smul(S.spow(td, d + 2, d), S.sinv(td2, d), d)
    one_minus = [Fraction(0)] + [
        -Fraction((-1) ** k, factorial(k)) for k in range(1, d + 1)]  # 1 - e^{-t}

    tau = {}
    for i in range(m + 1):
        col = S.smul(todd_q, S.spow(one_minus, i, d), d)
        tau["h^%d" % i] = map_series(col)
    for j in range(m, -1, -1):
        tdj = S.spow(S.todd_series(j), j + 1, j)
        tau["l_%d" % j] = {"l_%d" % (j - k): tdj[k]
                           for k in range(j + 1) if tdj[k]}

    X = CellularVariety("Q_%d" % d, d, cells, table, {"l_0": 1}, tangent, tau)
    X.hyperplane = {"h^1": 1} if d >= 3 else {"l_0": 2}
    _VARIETY_CACHE[key] = X
    return X


def product(X, Y):
    """X x Y with the Kunneth basis; all data is the product of the factors'."""
    key = ("prod", X.name, Y.name)
    hit = _VARIETY_CACHE.get(key)
    if hit is not None and hit._factors == (X, Y):
        return hit

    def lab(a, b):
        return "%s*%s" % (a, b)

    cells = [(lab(a, b), da + db) for (a, da) in X.cells for (b, db) in Y.cells]
    table = {}
    labels = [(a, b) for (a, _) in X.cells for (b, _) in Y.cells]
    for i, (a, b) in enumerate(labels):
        for (a2, b2) in labels[i:]:
            va = X._table.get((a, a2), {})
            vb = Y._table.get((b, b2), {})
            if va and vb:
                table[(lab(a, b), lab(a2, b2))] = {
                    lab(c, d): s1 * s2
                    for c, s1 in va.items() for d, s2 in vb.items()}
            else:
                table[(lab(a, b), lab(a2, b2))] = {}

    degree_vector = {lab(a, b): X.degree_vector[a] * Y.degree_vector[b]
                     for a in X.points for b in Y.points}
    tangent = {lab(a, Y.fundamental): v for a, v in X.tangent_ch.items()}
    for b, v in Y.tangent_ch.items():
        k = lab(X.fundamental, b)
        tangent[k] = tangent.get(k, Fraction(0)) + v

    tau = {}
    for ca, cola in X.tau_columns.items():
        for cb, colb in Y.tau_columns.items():
            tau[lab(ca, cb)] = {lab(ra, rb): va * vb
                                for ra, va in cola.items()
                                for rb, vb in colb.items()}

    XY = CellularVariety("%sx%s" % (X.name, Y.name), X.dim + Y.dim, cells,
                         table, degree_vector, tangent, tau)
    hypx = {lab(a, Y.fundamental): v
            for a, v in getattr(X, "hyperplane", {}).items()}
    for b, v in getattr(Y, "hyperplane", {}).items():
        k = lab(X.fundamental, b)
        hypx[k] = hypx.get(k, 0) + v
    XY.hyperplane = hypx
    XY._factors = (X, Y)
    _VARIETY_CACHE[key] = XY
    return XY


def external_product(x, y):
    """x boxtimes y on the product of the two carrying varieties."""
    XY = product(x.variety, y.variety)
    coeffs = {}
    for a, va in x.coeffs.items():
        for b, vb in y.coeffs.items():
            coeffs["%s*%s" % (a, b)] = va * vb
    if isinstance(x, ModPClass) or isinstance(y, ModPClass):
        p = x.p if isinstance(x, ModPClass) else y.p
        if isinstance(x, ModPClass) and isinstance(y, ModPClass) and x.p != y.p:
            raise VarietyMismatch("mod-p classes with different p")
        return ModPClass(XY, p, coeffs)
    rational = getattr(x, "rational", False) or getattr(y, "rational", False)
    return ChowClass(XY, coeffs, rational=rational)


def hyperplane_class(X):
    return make_class(X, dict(getattr(X, "hyperplane", {})))


def line_bundle(X, i):
    """O(i): rank one, c_1 = i times the hyperplane class."""
    h = hyperplane_class(X).scale(i)
    ch = X.unit(rational=True)
    term = X.unit(rational=True)
    for k in range(1, X.dim + 1):
        term = term * h
        if term.is_zero():
            break
        ch = ch + term.scale(Fraction(1, factorial(k)))
    return VirtualBundle(X, 1, ch)


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class Morphism:
    """A registered map: pushforward/pullback matrices plus flags and T_f.

    push_matrix preserves dimension, pull_matrix preserves codimension and is
    a ring map; both facts and the projection formula are verified on all
    basis pairs at construction.
    """

    def __init__(self, name, source, target, push, pull, proper, lci, flat,
                 T_f=None, kind=None, params=None):
        self.name = name
        self.source = source
        self.target = target
        self.push = {a: {b: int(v) for b, v in row.items() if v}
                     for a, row in push.items()}
        self.pull = {b: {a: int(v) for a, v in row.items() if v}
                     for b, row in pull.items()}
        self.proper = proper
        self.lci = lci
        self.flat = flat
        self.smooth_source = True
        self.smooth_target = True
        self.T_f = T_f
        self.kind = kind
        self.params = params or {}
        self._validate()

    def _validate(self):
        src, tgt = self.source, self.target
        for a in src.labels():
            row = self.push.get(a, {})
            for b in row:
                if tgt.cell_dim(b) != src.cell_dim(a):
                    raise InvalidVariety(
                        "%s: push of %r is not dimension-preserving" % (self.name, a))
        for y in tgt.labels():
            row = self.pull.get(y, {})
            for a in row:
                if src.cell_codim(a) != tgt.cell_codim(y):
                    raise InvalidVariety(
                        "%s: pull of %r is not codimension-preserving" % (self.name, y))
        if self.pull_class(tgt.unit()) != src.unit():
            raise InvalidVariety("%s: pull does not preserve the unit" % self.name)
        for y1 in tgt.labels():
            py1 = self.pull_class(tgt.basis_class(y1))
            for y2 in tgt.labels():
                lhs = self.pull_class(tgt.basis_class(y1) * tgt.basis_class(y2))
                rhs = py1 * self.pull_class(tgt.basis_class(y2))
                if lhs != rhs:
                    raise InvalidVariety(
                        "%s: pull is not multiplicative on (%r, %r)"
                        % (self.name, y1, y2))
        for y in tgt.labels():
            py = self.pull_class(tgt.basis_class(y))
            for x in src.labels():
                lhs = self.push_class(py * src.basis_class(x))
                rhs = tgt.basis_class(y) * self.push_class(src.basis_class(x))
                if lhs != rhs:
                    raise InvalidVariety(
                        "%s: projection formula fails on (%r, %r)"
                        % (self.name, y, x))
        if self.lci:
            if self.T_f is None:
                raise InvalidVariety("%s: lci morphism needs T_f" % self.name)
            if self.T_f.rank != src.dim - tgt.dim:
                raise InvalidVariety("%s: rank(T_f) != dim(source) - dim(target)"
                                     % self.name)

    def _apply(self, matrix, cls, out_variety):
        out = {}
        for l, v in cls.coeffs.items():
            for l2, s in matrix.get(l, {}).items():
                out[l2] = out.get(l2, 0) + v * s
        if isinstance(cls, ModPClass):
            return ModPClass(out_variety, cls.p, out)
        return ChowClass(out_variety, out, rational=cls.rational)

    def push_class(self, x):
        if x.variety is not self.source:
            raise VarietyMismatch("pushforward input lives on %s, not %s"
                                  % (x.variety.name, self.source.name))
        return self._apply(self.push, x, self.target)

    def pull_class(self, y):
        if y.variety is not self.target:
            raise VarietyMismatch("pullback input lives on %s, not %s"
                                  % (y.variety.name, self.target.name))
        return self._apply(self.pull, y, self.source)

    def map_degree(self):
        """Coefficient of the target fundamental class in push(fundamental)."""
        return self.push.get(self.source.fundamental, {}).get(
            self.target.fundamental, 0)

    def __repr__(self):
        return "Morphism(%s)" % self.name


def pushforward(f, x):
    if not f.proper:
        raise FlagViolation("pushforward needs a proper morphism")
    return f.push_class(x)


def pullback(f, y):
    if not (f.lci or f.flat):
        raise FlagViolation("pullback needs an lci or flat morphism")
    return f.pull_class(y)


def registered_morphisms():
    return tuple(_REGISTRY)


def _exp_class(X, cls, n=None):
    """e^{cls} in the Chow ring, for cls of positive codimension."""
    out = X.unit(rational=True)
    term = X.unit(rational=True)
    for k in range(1, X.dim + 1):
        term = term * cls
        if term.is_zero():
            break
        out = out + term.scale(Fraction(1, factorial(k)))
    return out


def build_morphism(kind, **params):
    """Construct and register a morphism from the finite catalog.

    Kinds: linear_embedding(m, n), veronese(n, deg), quadric_in_projective(d),
    linear_in_quadric(j, d), product_projection(factors, onto),
    pn_self_map(degree).
    """
    if kind == "product_projection" and "factors" in params:
        params = dict(params)
        params["factors"] = tuple(variety_from_spec(f)
                                  for f in params["factors"])
    key = (kind, tuple(sorted(
        (k, v if isinstance(v, (int, str)) else tuple(f.name for f in v))
        for k, v in params.items())))
    if key in _MORPHISM_CACHE:
        return _MORPHISM_CACHE[key]

    if kind == "linear_embedding":
        f = _linear_embedding(params["m"], params["n"])
    elif kind == "veronese":
        f = _veronese(params["n"], params["deg"])
    elif kind == "quadric_in_projective":
        f = _quadric_in_projective(params["d"])
    elif kind == "linear_in_quadric":
        f = _linear_in_quadric(params["j"], params["d"])
    elif kind == "product_projection":
        f = _product_projection(params["factors"], params.get("onto", 0))
    elif kind == "pn_self_map":
        f = _pn_self_map(params["degree"])
    else:
        raise UnknownKind("no morphism kind %r" % kind)
    _MORPHISM_CACHE[key] = f
    _REGISTRY.append(f)
    return f


def _linear_embedding(m, n):
    if not 0 <= m <= n:
        raise IncompatibleDimensions("linear embedding needs 0 <= m <= n")
    Pm, Pn = projective_space(m), projective_space(n)
    push = {"h^%d" % (m - j): {"h^%d" % (n - j): 1} for j in range(m + 1)}
    pull = {"h^%d" % i: ({"h^%d" % i: 1} if i <= m else {}) for i in range(n + 1)}
    T_f = line_bundle(Pm, 1).scale(-(n - m)) if n > m else \
        VirtualBundle(Pm, 0, Pm.zero(rational=True))
    return Morphism("P^%d->P^%d:linear" % (m, n), Pm, Pn, push, pull,
                    proper=True, lci=True, flat=(m == n), T_f=T_f,
                    kind="linear_embedding", params={"m": m, "n": n})


def _veronese(n, deg):
    if n < 0 or deg < 1:
        raise IncompatibleDimensions("veronese needs n >= 0, deg >= 1")
    N = comb(n + deg, n) - 1
    Pn, PN = projective_space(n), projective_space(N)
    push = {"h^%d" % (n - j): {"h^%d" % (N - j): deg ** j} for j in range(n + 1)}
    pull = {"h^%d" % i: ({"h^%d" % i: deg ** i} if i <= n else {})
            for i in range(N + 1)}
    # T_f = T_{P^n} - pull T_{P^N}
    ch = tangent_bundle(Pn).ch - (
        _exp_class(Pn, make_class(Pn, Pn.hyperplane).scale(deg)).scale(N + 1)
        - Pn.unit(rational=True))
    T_f = VirtualBundle(Pn, n - N, ch)
    return Morphism("P^%d->P^%d:veronese%d" % (n, N, deg), Pn, PN, push, pull,
                    proper=True, lci=True, flat=(N == n), T_f=T_f,
                    kind="veronese", params={"n": n, "deg": deg})


def _quadric_in_projective(d):
    Q = odd_quadric(d)
    P = projective_space(d + 1)
    m = (d - 1) // 2
    push = {}
    for i in range(m + 1):
        push["h^%d" % i] = {"h^%d" % (i + 1): 2}
    for j in range(m + 1):
        push["l_%d" % j] = {"h^%d" % (d + 1 - j): 1}
    pull = {"h^%d" % i: dict(_quadric_h_power(d, i)) for i in range(d + 2)}
    T_f = line_bundle(Q, 2).scale(-1)
    return Morphism("Q_%d->P^%d" % (d, d + 1), Q, P, push, pull,
                    proper=True, lci=True, flat=False, T_f=T_f,
                    kind="quadric_in_projective", params={"d": d})


def _linear_in_quadric(j, d):
    Q = odd_quadric(d)
    m = (d - 1) // 2
    if not 0 <= j <= m:
        raise IncompatibleDimensions(
            "Q_%d contains linear subspaces only up to dimension %d" % (d, m))
    Pj = projective_space(j)
    push = {"h^%d" % (j - a): {"l_%d" % a: 1} for a in range(j + 1)}
    pull = {}
    for i in range(m + 1):
        pull["h^%d" % i] = {"h^%d" % i: 1} if i <= j else {}
    for a in range(m + 1):
        pull["l_%d" % a] = {}  # codim d-a exceeds j on P^j
    t = S.sadd(S.sscale(j - d - 1, S.exp_t(1, j), j), S.exp_t(2, j), j)
    ch = ChowClass(Pj, {"h^%d" % k: t[k] for k in range(j + 1) if t[k]},
                   rational=True)
    T_f = VirtualBundle(Pj, j - d, ch)
    return Morphism("P^%d->Q_%d" % (j, d), Pj, Q, push, pull,
                    proper=True, lci=True, flat=False, T_f=T_f,
                    kind="linear_in_quadric", params={"j": j, "d": d})


def _product_projection(factors, onto):
    if len(factors) != 2 or onto not in (0, 1):
        raise IncompatibleDimensions("product_projection needs two factors "
                                     "and onto in {0, 1}")
    fs = [f if isinstance(f, CellularVariety) else variety_from_spec(f)
          for f in factors]
    X, Y = fs
    XY = product(X, Y)
    tgt = fs[onto]
    other = fs[1 - onto]
    push = {}
    for (a, da) in X.cells:
        for (b, db) in Y.cells:
            lab = "%s*%s" % (a, b)
            if onto == 0:
                push[lab] = {a: Y.degree_vector[b]} if db == 0 else {}
            else:
                push[lab] = {b: X.degree_vector[a]} if da == 0 else {}
    if onto == 0:
        pull = {a: {"%s*%s" % (a, Y.fundamental): 1} for a in X.labels()}
        ch = ChowClass(XY, {"%s*%s" % (X.fundamental, b): v
                            for b, v in Y.tangent_ch.items()}, rational=True)
    else:
        pull = {b: {"%s*%s" % (X.fundamental, b): 1} for b in Y.labels()}
        ch = ChowClass(XY, {"%s*%s" % (a, Y.fundamental): v
                            for a, v in X.tangent_ch.items()}, rational=True)
    T_f = VirtualBundle(XY, other.dim, ch)
    return Morphism("%s->%s:projection" % (XY.name, tgt.name), XY, tgt,
                    push, pull, proper=True, lci=True, flat=True, T_f=T_f,
                    kind="product_projection",
                    params={"factors": (X.name, Y.name), "onto": onto})


def _pn_self_map(degree):
    if degree < 1:
        raise IncompatibleDimensions("self map degree must be >= 1")
    P1 = projective_space(1)
    push = {"h^0": {"h^0": degree}, "h^1": {"h^1": 1}}
    pull = {"h^0": {"h^0": 1}, "h^1": {"h^1": degree}}
    ch = ChowClass(P1, {"h^1": Fraction(2 - 2 * degree)}, rational=True)
    T_f = VirtualBundle(P1, 0, ch)  # [O(2)] - [O(2m)]
    return Morphism("P^1->P^1:deg%d" % degree, P1, P1, push, pull,
                    proper=True, lci=True, flat=True, T_f=T_f,
                    kind="pn_self_map", params={"degree": degree})


# ---------------------------------------------------------------------------
# JSON specs
# ---------------------------------------------------------------------------

def variety_from_spec(spec, max_dim=None):
    """Builder dispatch for {"type": ...} dicts and P^n / Q_d / AxB shorthand."""
    if isinstance(spec, CellularVariety):
        X = spec
    elif isinstance(spec, str):
        X = _variety_from_shorthand(spec)
    elif isinstance(spec, dict):
        t = spec.get("type")
        if t == "projective_space":
            X = projective_space(int(spec["n"]))
        elif t == "odd_quadric":
            X = odd_quadric(int(spec["dim"]))
        elif t == "product":
            factors = [variety_from_spec(f) for f in spec["factors"]]
            if len(factors) < 2:
                raise ValueError("product needs at least two factors")
            X = factors[0]
            for Y in factors[1:]:
                X = product(X, Y)
        else:
            raise ValueError("unknown variety type %r" % t)
    else:
        raise ValueError("variety spec must be a dict or shorthand string")
    if max_dim is not None and X.dim > max_dim:
        raise ValueError("variety %s exceeds the dimension cap %d"
                         % (X.name, max_dim))
    return X


def _variety_from_shorthand(text):
    parts = text.split("x")
    if len(parts) > 1:
        X = _variety_from_shorthand(parts[0])
        for part in parts[1:]:
            X = product(X, _variety_from_shorthand(part))
        return X
    text = text.strip()
    if text.startswith("P^"):
        return projective_space(int(text[2:]))
    if text.startswith("Q_"):
        return odd_quadric(int(text[2:]))
    raise ValueError("cannot parse variety shorthand %r" % text)


def morphism_from_spec(spec):
    """Morphism spec JSON mirrors the build_morphism kinds."""
    kind = spec.get("kind")
    params = {k: v for k, v in spec.items() if k != "kind"}
    return build_morphism(kind, **params)
