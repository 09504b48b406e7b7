"""Truncated one-variable power series over exact rationals.

A series truncated at degree n is a list of n+1 Fractions [a_0, ..., a_n].
This is the auxiliary ring in which all per-Chern-root data (Todd, Bott,
tau-matrix columns) is expanded before being mapped onto a cell basis.
"""
from fractions import Fraction
from math import factorial

from .errors import NonInvertibleSeries


def series(coeffs, n):
    """Pad or truncate coeffs to length n+1, coercing to Fraction."""
    out = [Fraction(c) for c in coeffs[: n + 1]]
    out += [Fraction(0)] * (n + 1 - len(out))
    return out


def smul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > n:
            continue
        for j, bj in enumerate(b):
            if i + j > n:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def sadd(a, b, n):
    return [a[i] + b[i] for i in range(n + 1)]


def sscale(c, a, n):
    c = Fraction(c)
    return [c * a[i] for i in range(n + 1)]


def spow(a, k, n):
    out = series([1], n)
    for _ in range(k):
        out = smul(out, a, n)
    return out


def sinv(a, n):
    """Multiplicative inverse; needs a nonzero constant term."""
    if a[0] == 0:
        raise NonInvertibleSeries("series has zero constant term")
    inv0 = Fraction(1, 1) / a[0]
    out = [inv0] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += a[i] * out[k - i]
        out[k] = -inv0 * acc
    return out


def sexp(a, n):
    """exp of a series with zero constant term."""
    assert a[0] == 0
    out = series([1], n)
    term = series([1], n)
    for k in range(1, n + 1):
        term = smul(term, a, n)
        out = sadd(out, sscale(Fraction(1, factorial(k)), term, n), n)
    return out


def slog(a, n):
    """log of a series with constant term 1."""
    assert a[0] == 1
    u = [Fraction(0)] + [a[i] for i in range(1, n + 1)]
    out = [Fraction(0)] * (n + 1)
    term = series([1], n)
    for k in range(1, n + 1):
        term = smul(term, u, n)
        sign = Fraction((-1) ** (k + 1), k)
        out = sadd(out, sscale(sign, term, n), n)
    return out


def exp_t(c, n):
    """e^{c t} truncated at degree n."""
    c = Fraction(c)
    return [c ** k / factorial(k) for k in range(n + 1)]


def todd_series(n):
    """t / (1 - e^{-t}): the Todd genus of a single Chern root."""
    # 1 - e^{-t} = t - t^2/2 + t^3/6 - ... ; divide out one factor of t first.
    body = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    return sinv(body, n)


def theta_series(p, n):
    """1 + e^{-t} + ... + e^{-(p-1)t}: Bott's class of a single root."""
    out = [Fraction(0)] * (n + 1)
    for j in range(p):
        out = sadd(out, exp_t(-j, n), n)
    return out


def w_series(p, n):
    """1 + (-t)^{p-1}: the mod-p analogue of the total Chern class."""
    out = series([1], n)
    if p - 1 <= n:
        out[p - 1] += Fraction((-1) ** (p - 1))
    return out


def chern_root_series(n):
    """1 + t: total Chern class of a single root."""
    return series([1, 1], n)
