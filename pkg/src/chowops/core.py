"""Exact graded commutative algebra over the cell basis of a cellular variety.

Chow classes are sparse coefficient vectors over the cells, with either
arbitrary-precision integer coefficients (integral mode) or Fractions
(rational mode, used for everything Riemann-Roch related).  The ring
structure comes from a finite table of structure constants which is checked
exhaustively for associativity, commutativity, unitality and grading when
the variety is constructed.
"""
from fractions import Fraction

from .errors import (
    InvalidVariety,
    IntegralityViolation,
    UnknownLabel,
    VarietyMismatch,
)

FUNDAMENTAL_ALIAS = "1"  # accepted in JSON input for the codim-0 cell


def _as_coeff(v):
    # floats are rejected on purpose: the whole engine is exact
    if isinstance(v, bool) or isinstance(v, float):
        raise TypeError("coefficient must be int or Fraction, got %r" % (v,))
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    raise TypeError("coefficient must be int or Fraction, got %r" % (v,))


class CellularVariety:
    """Finite presentation of a split cellular variety.

    cells: ordered list of (label, dimension) pairs; exactly one cell has
    dimension == dim (the fundamental class, which is the ring unit) and at
    least one has dimension 0.  mult_table maps unordered label pairs to
    sparse integer vectors; missing pairs multiply to zero.  tau_columns maps
    each cell label to the rational vector tau[O_Z] of its closure.
    """

    def __init__(self, name, dim, cells, mult_table, degree_vector,
                 tangent_ch, tau_columns):
        self.name = name
        self.dim = dim
        self.cells = [(str(l), int(d)) for (l, d) in cells]
        self._dims = {}
        self._index = {}
        for i, (label, d) in enumerate(self.cells):
            if label in self._dims:
                raise InvalidVariety("duplicate cell label %r" % label)
            if not 0 <= d <= dim:
                raise InvalidVariety("cell %r has dimension %d outside [0, %d]"
                                     % (label, d, dim))
            self._dims[label] = d
            self._index[label] = i
        tops = [l for (l, d) in self.cells if d == dim]
        if len(tops) != 1:
            raise InvalidVariety("need exactly one %d-dimensional cell, got %r"
                                 % (dim, tops))
        self.fundamental = tops[0]
        self.fundamental_index = self._index[self.fundamental]
        self.points = [l for (l, d) in self.cells if d == 0]
        if not self.points:
            raise InvalidVariety("need at least one 0-dimensional cell")

        self._table = self._build_table(mult_table)
        self.degree_vector = {str(l): int(v) for l, v in degree_vector.items()}
        if set(self.degree_vector) != set(self.points):
            raise InvalidVariety("degree_vector must cover exactly the "
                                 "0-dimensional cells")

        self.tangent_ch = {l: Fraction(v) for l, v in tangent_ch.items() if v}
        if self.tangent_ch.get(self.fundamental, Fraction(0)) != dim:
            raise InvalidVariety("tangent_ch rank component must equal dim")

        self.tau_columns = {
            str(c): {str(r): Fraction(v) for r, v in col.items() if v}
            for c, col in tau_columns.items()
        }
        self._check_tau()
        self._check_ring()
        self._cache = {}

    # -- construction checks ------------------------------------------------

    def _build_table(self, mult_table):
        table = {}
        for (a, b), vec in mult_table.items():
            if a not in self._dims or b not in self._dims:
                raise InvalidVariety("mult_table entry (%r, %r) uses unknown "
                                     "labels" % (a, b))
            clean = {}
            for c, v in vec.items():
                if c not in self._dims:
                    raise InvalidVariety("mult_table value label %r unknown" % c)
                if not isinstance(v, int):
                    raise InvalidVariety("structure constants must be integers")
                if v:
                    clean[c] = v
            if (a, b) in table and table[(a, b)] != clean:
                raise InvalidVariety("conflicting entries for (%r, %r)" % (a, b))
            table[(a, b)] = clean
            if (b, a) in mult_table:
                other = {c: v for c, v in mult_table[(b, a)].items() if v}
                if other != clean:
                    raise InvalidVariety("product of %r and %r is not "
                                         "commutative" % (a, b))
            table[(b, a)] = clean
        one = self.fundamental
        for l in self._dims:
            expected = {l: 1}
            if (one, l) in table:
                if table[(one, l)] != expected:
                    raise InvalidVariety("fundamental class is not a unit on %r" % l)
            table[(one, l)] = expected
            table[(l, one)] = expected
        return table

    def _raw_mul(self, va, vb):
        """Multiply sparse label->coefficient dicts through the table."""
        out = {}
        for a, ca in va.items():
            if not ca:
                continue
            for b, cb in vb.items():
                if not cb:
                    continue
                for c, s in self._table.get((a, b), {}).items():
                    out[c] = out.get(c, 0) + ca * cb * s
        return {c: v for c, v in out.items() if v}

    def _check_ring(self):
        labels = [l for (l, _) in self.cells]
        for a in labels:
            da = self._dims[a]
            for b in labels:
                prod = self._table.get((a, b), {})
                target = da + self._dims[b] - self.dim
                for c in prod:
                    if self._dims[c] != target:
                        raise InvalidVariety(
                            "product %r * %r hits %r, violating the grading"
                            % (a, b, c))
                if target < 0 and prod:
                    raise InvalidVariety("product %r * %r should vanish" % (a, b))
        for a in labels:
            for b in labels:
                ab = self._table.get((a, b), {})
                for c in labels:
                    left = self._raw_mul(ab, {c: 1})
                    right = self._raw_mul({a: 1}, self._table.get((b, c), {}))
                    if left != right:
                        raise InvalidVariety(
                            "associativity fails on (%r, %r, %r)" % (a, b, c))

    def _check_tau(self):
        if set(self.tau_columns) != set(self._dims):
            raise InvalidVariety("tau_matrix must have one column per cell")
        for col, vec in self.tau_columns.items():
            d = self._dims[col]
            if vec.get(col) != 1:
                raise InvalidVariety("tau column %r has no unit diagonal" % col)
            for row, v in vec.items():
                if row != col and self._dims[row] >= d:
                    raise InvalidVariety(
                        "tau column %r is not triangular (entry at %r)"
                        % (col, row))

    # -- basic queries --------------------------------------------------------

    def labels(self):
        return [l for (l, _) in self.cells]

    def cell_dim(self, label):
        try:
            return self._dims[label]
        except KeyError:
            raise UnknownLabel("variety %s has no cell %r" % (self.name, label))

    def cell_codim(self, label):
        return self.dim - self.cell_dim(label)

    def cells_of_dim(self, d):
        return [l for (l, dd) in self.cells if dd == d]

    def resolve_label(self, label):
        """Accept the "1" alias for the fundamental cell."""
        if label == FUNDAMENTAL_ALIAS and label not in self._dims:
            return self.fundamental
        if label not in self._dims:
            raise UnknownLabel("variety %s has no cell %r" % (self.name, label))
        return label

    # -- canonical classes ----------------------------------------------------

    def zero(self, rational=False):
        return ChowClass(self, {}, rational=rational)

    def unit(self, rational=False):
        return ChowClass(self, {self.fundamental: 1}, rational=rational)

    def basis_class(self, label, rational=False):
        return ChowClass(self, {self.resolve_label(label): 1}, rational=rational)

    def tau_class(self, label):
        """tau[O_Z] of the closure of a cell, as a rational Chow class."""
        return ChowClass(self, dict(self.tau_columns[self.resolve_label(label)]),
                         rational=True)

    def tangent_chern_character(self):
        return ChowClass(self, dict(self.tangent_ch), rational=True)

    def __repr__(self):
        return "CellularVariety(%s, dim=%d, %d cells)" % (
            self.name, self.dim, len(self.cells))


class ChowClass:
    """Sparse exact coefficient vector over the cells of one variety."""

    __slots__ = ("variety", "coeffs", "rational")

    def __init__(self, variety, coeffs, rational=False):
        clean = {}
        for label, v in coeffs.items():
            if label not in variety._dims:
                raise UnknownLabel("variety %s has no cell %r"
                                   % (variety.name, label))
            v = _as_coeff(v)
            if v:
                clean[label] = v
        if not rational and any(isinstance(v, Fraction) for v in clean.values()):
            rational = True
        self.variety = variety
        self.coeffs = clean
        self.rational = rational

    # -- structure ------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def is_integral(self):
        return all(not isinstance(v, Fraction) or v.denominator == 1
                   for v in self.coeffs.values())

    def as_integral(self):
        """Reinterpret as an integral class; raises if any coefficient is fractional."""
        if not self.is_integral():
            raise IntegralityViolation("class has fractional coefficients: %s"
                                       % format_class(self))
        return ChowClass(self.variety, {l: int(v) for l, v in self.coeffs.items()})

    def support_dims(self):
        return sorted({self.variety.cell_dim(l) for l in self.coeffs})

    def top_dim(self):
        dims = self.support_dims()
        return dims[-1] if dims else None

    def dim_component(self, d):
        V = self.variety
        return ChowClass(V, {l: v for l, v in self.coeffs.items()
                             if V.cell_dim(l) == d}, rational=self.rational)

    def codim_component(self, c):
        return self.dim_component(self.variety.dim - c)

    # -- arithmetic -------------------------------------------------------------

    def _same(self, other):
        if self.variety is not other.variety:
            raise VarietyMismatch("classes live on %s and %s"
                                  % (self.variety.name, other.variety.name))

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for l, v in other.coeffs.items():
            out[l] = out.get(l, 0) + v
        return ChowClass(self.variety, out,
                         rational=self.rational or other.rational)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ChowClass(self.variety, {l: -v for l, v in self.coeffs.items()},
                         rational=self.rational)

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            self._same(other)
            out = self.variety._raw_mul(self.coeffs, other.coeffs)
            return ChowClass(self.variety, out,
                             rational=self.rational or other.rational)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if isinstance(c, float):
            raise TypeError("exact arithmetic only; got a float scalar")
        c = Fraction(c) if not isinstance(c, int) else c
        rational = self.rational or (isinstance(c, Fraction) and c.denominator != 1)
        return ChowClass(self.variety,
                         {l: v * c for l, v in self.coeffs.items()},
                         rational=rational)

    def power(self, k):
        out = self.variety.unit(rational=self.rational)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ChowClass):
            return NotImplemented
        return (self.variety is other.variety
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.variety), frozenset(self.coeffs.items())))

    def __repr__(self):
        return "ChowClass(%s: %s)" % (self.variety.name, format_class(self))


class ModPClass:
    """Chow class with coefficients reduced to [0, p)."""

    __slots__ = ("variety", "p", "coeffs")

    def __init__(self, variety, p, coeffs):
        self.variety = variety
        self.p = p
        clean = {}
        for label, v in coeffs.items():
            if label not in variety._dims:
                raise UnknownLabel("variety %s has no cell %r"
                                   % (variety.name, label))
            v = int(v) % p
            if v:
                clean[label] = v
        self.coeffs = clean

    @classmethod
    def from_integral(cls, x, p):
        if not x.is_integral():
            raise IntegralityViolation("cannot reduce a fractional class mod %d" % p)
        return cls(x.variety, p, {l: int(v) % p for l, v in x.coeffs.items()})

    def lift(self):
        """Integral representative with coefficients in [0, p)."""
        return ChowClass(self.variety, dict(self.coeffs))

    def is_zero(self):
        return not self.coeffs

    def dim_component(self, d):
        V = self.variety
        return ModPClass(V, self.p, {l: v for l, v in self.coeffs.items()
                                     if V.cell_dim(l) == d})

    def support_dims(self):
        return sorted({self.variety.cell_dim(l) for l in self.coeffs})

    def _same(self, other):
        if self.variety is not other.variety or self.p != other.p:
            raise VarietyMismatch("mod-p classes do not match")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for l, v in other.coeffs.items():
            out[l] = out.get(l, 0) + v
        return ModPClass(self.variety, self.p, out)

    def __mul__(self, other):
        if isinstance(other, ModPClass):
            self._same(other)
            out = self.variety._raw_mul(self.coeffs, other.coeffs)
            return ModPClass(self.variety, self.p, out)
        return ModPClass(self.variety, self.p,
                         {l: v * int(other) for l, v in self.coeffs.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, ModPClass):
            return NotImplemented
        return (self.variety is other.variety and self.p == other.p
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.variety), self.p, frozenset(self.coeffs.items())))

    def __repr__(self):
        return "ModPClass(%s mod %d: %s)" % (
            self.variety.name, self.p,
            " + ".join("%d.%s" % (v, l) for l, v in sorted(self.coeffs.items()))
            or "0")


# -- module-level operations ---------------------------------------------------

def make_class(variety, coeffs, rational=False):
    """Normalized Chow class from a label -> coefficient mapping."""
    return ChowClass(variety, {variety.resolve_label(l): v
                               for l, v in coeffs.items()}, rational=rational)


def mul(a, b):
    return a * b


def degree(a):
    """Pair the dimension-0 component with the degree vector."""
    total = Fraction(0)
    for l, v in a.coeffs.items():
        if a.variety.cell_dim(l) == 0:
            total += Fraction(v) * a.variety.degree_vector[l]
    return int(total) if total.denominator == 1 else total


def grade_component(a, j):
    """Restriction of the coefficients to the dimension-j cells."""
    return a.dim_component(j)


# -- exact serialization -------------------------------------------------------

def coeff_to_str(v):
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return "%d/%d" % (v.numerator, v.denominator)


def coeff_from_str(s):
    return _as_coeff(Fraction(str(s)))


def class_to_json(a):
    """Labels mapped to exact decimal strings, e.g. {"h^2": "1", "l_1": "-3"}."""
    return {l: coeff_to_str(v) for l, v in sorted(a.coeffs.items())}


def class_from_json(variety, obj, rational=None):
    coeffs = {variety.resolve_label(l): coeff_from_str(v) for l, v in obj.items()}
    cls = ChowClass(variety, coeffs)
    if rational:
        cls = ChowClass(variety, coeffs, rational=True)
    return cls


def modp_to_json(a):
    return {l: str(v) for l, v in sorted(a.coeffs.items())}


def format_class(a):
    if not a.coeffs:
        return "0"
    parts = []
    order = {l: i for i, (l, _) in enumerate(a.variety.cells)}
    for l in sorted(a.coeffs, key=order.get):
        parts.append("%s.%s" % (coeff_to_str(a.coeffs[l]), l))
    return " + ".join(parts)
