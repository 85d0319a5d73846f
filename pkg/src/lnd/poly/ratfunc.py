"""Rational functions in one variable, used as coefficients of Q(x)[...] rings."""

from __future__ import annotations

from functools import lru_cache

import gmpy2
from gmpy2 import mpq

from ..errors import InputError, RingMismatch
from .gcd import dense_divmod, dense_gcd, from_dense, to_dense
from .polynomial import Polynomial
from .ring import Ring, to_q


@lru_cache(maxsize=None)
def base_ring(var: str) -> Ring:
    return Ring((var,))


class RationalFunction:
    """num/den with den monic and gcd(num, den) = 1.

    Both parts are kept as dense coefficient lists internally; ``numerator``
    and ``denominator`` expose them as univariate Polynomials.
    """

    __slots__ = ("var", "_n", "_d")

    def __init__(self, var, num, den=None, _reduced=False):
        self.var = var
        if not _reduced:
            num = [to_q(c) for c in num]
            den = None if den is None else [to_q(c) for c in den]
        num = _trim(list(num))
        den = [mpq(1)] if den is None else _trim(list(den))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self._n, self._d = [], [mpq(1)]
            return
        if not _reduced and len(den) > 1:
            g = dense_gcd(num, den)
            if len(g) > 1:
                num = dense_divmod(num, g)[0]
                den = dense_divmod(den, g)[0]
        lc = den[-1]
        if lc != 1:
            inv = 1 / lc
            num = [c * inv for c in num]
            den = [c * inv for c in den]
        self._n, self._d = num, den

    @classmethod
    def coerce(cls, c, var):
        if isinstance(c, RationalFunction):
            if c.var != var:
                raise RingMismatch(f"coefficient in Q({c.var}) used where Q({var}) expected")
            return c
        if isinstance(c, Polynomial):
            if c.ring.coeff_var is not None:
                raise RingMismatch("nested rational-function coefficients are not supported")
            if c.is_constant():
                return cls(var, [c.constant_coeff()])
            if c.ring.names == (var,):
                return cls(var, to_dense(c), _reduced=True)
            raise RingMismatch(f"{c} is not a polynomial in {var} alone")
        return cls(var, [to_q(c)], _reduced=True)

    @classmethod
    def from_polys(cls, num: Polynomial, den: Polynomial):
        var = num.ring.names[0]
        return cls(var, to_dense(num), to_dense(den))

    @property
    def numerator(self) -> Polynomial:
        return from_dense(self._n, base_ring(self.var))

    @property
    def denominator(self) -> Polynomial:
        return from_dense(self._d, base_ring(self.var))

    def is_polynomial(self) -> bool:
        return len(self._d) == 1

    def is_constant(self) -> bool:
        return len(self._d) == 1 and len(self._n) <= 1

    def constant(self):
        if not self.is_constant():
            raise InputError(f"{self} is not a constant")
        return self._n[0] if self._n else mpq(0)

    def degree_pair(self):
        return len(self._n) - 1, len(self._d) - 1

    def _other(self, o):
        if isinstance(o, RationalFunction):
            if o.var != self.var:
                raise RingMismatch(f"Q({self.var}) vs Q({o.var})")
            return o
        if isinstance(o, Polynomial):
            return RationalFunction.coerce(o, self.var)
        return RationalFunction(self.var, [to_q(o)], _reduced=True)

    def __bool__(self):
        return bool(self._n)

    def __add__(self, o):
        o = self._other(o)
        if self._d == o._d:
            return RationalFunction(self.var, _add(self._n, o._n), self._d)
        return RationalFunction(self.var, _add(_mul(self._n, o._d), _mul(o._n, self._d)), _mul(self._d, o._d))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.var, [-c for c in self._n], self._d, _reduced=True)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        if len(o._n) == 1 and len(o._d) == 1:
            c = o._n[0]
            return RationalFunction(self.var, [x * c for x in self._n], self._d, _reduced=True)
        if len(self._d) == 1 and len(o._d) == 1:
            return RationalFunction(self.var, _mul(self._n, o._n), _reduced=True)
        return RationalFunction(self.var, _mul(self._n, o._n), _mul(self._d, o._d))

    __rmul__ = __mul__

    def inverse(self):
        if not self._n:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.var, self._d, self._n, _reduced=True)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = RationalFunction(self.var, [mpq(1)])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def diff(self):
        """d/dvar by the quotient rule."""
        dn, dd = _deriv(self._n), _deriv(self._d)
        num = _add(_mul(dn, self._d), [-c for c in _mul(self._n, dd)])
        return RationalFunction(self.var, num, _mul(self._d, self._d))

    def evaluate(self, value):
        value = to_q(value)
        d = _horner(self._d, value)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {self.var}={value}")
        return _horner(self._n, value) / d

    def __eq__(self, o):
        if isinstance(o, RationalFunction):
            return self.var == o.var and self._n == o._n and self._d == o._d
        try:
            o = self._other(o)
        except (InputError, TypeError):
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        if len(self._d) == 1 and len(self._n) <= 1:
            return hash(self._n[0] if self._n else mpq(0))
        return hash((self.var, tuple(self._n), tuple(self._d)))

    def __str__(self):
        from .parse import format_poly

        num = format_poly(self.numerator)
        if len(self._d) == 1:
            return num
        return f"({num})/({format_poly(self.denominator)})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def _mul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _deriv(a):
    return [c * i for i, c in enumerate(a)][1:]


def _horner(a, v):
    acc = mpq(0)
    for c in reversed(a):
        acc = acc * v + c
    return acc


def denominator_lcm(p: Polynomial) -> Polynomial:
    """Monic lcm of the coefficient denominators of a Q(x)-ring polynomial."""
    var = p.ring.coeff_var
    acc = [mpq(1)]
    for c in p._t.values():
        d = c._d
        if len(d) > 1:
            g = dense_gcd(acc, d)
            acc = _mul(acc, dense_divmod(d, g)[0])
    return from_dense(acc, base_ring(var))


def clear_denominators(p: Polynomial, flat: Ring) -> Polynomial:
    """Multiply by the denominator lcm and move to the flat ring Q[x, vars].

    Integer denominators of the rational coefficients are left in place.
    """
    ring = p.ring
    var = ring.coeff_var
    if ring.coeff_var is None:
        return p.embed(flat)
    lcm = denominator_lcm(p)._t
    L = [mpq(0)] * (max(lcm, default=0) + 1)
    for m, c in lcm.items():
        L[m] = c
    xi = flat.index(var)
    idx = [flat.index(n) for n in ring.names]
    out = {}
    for m, c in p._t.items():
        num = dense_divmod(_mul(c._n, L), c._d)[0]
        base = 0
        for j, e in zip(idx, ring.unpack(m)):
            base |= flat.unit_monomial(j, e)
        for k, a in enumerate(num):
            if a:
                out[base | flat.unit_monomial(xi, k)] = a
    return Polynomial(flat, out)


def from_flat(p: Polynomial, ring: Ring) -> Polynomial:
    """Inverse of ``clear_denominators`` up to the cleared factor."""
    var = ring.coeff_var
    if var is None:
        return Polynomial(ring, dict(p.embed(ring)._t)) if p.ring != ring else p
    xi = p.ring.index(var)
    idx = [p.ring.index(n) for n in ring.names]
    buckets = {}
    for m, c in p._t.items():
        exps = p.ring.unpack(m)
        key = ring.pack([exps[j] for j in idx])
        d = buckets.setdefault(key, {})
        d[exps[xi]] = c
    out = {}
    for key, coeffs in buckets.items():
        dense = [mpq(0)] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            dense[e] = c
        out[key] = RationalFunction(var, dense, _reduced=True)
    return Polynomial(ring, out)


def integer_content_lcm(p: Polynomial):
    den = 1
    for c in p._t.values():
        den = gmpy2.lcm(den, c.denominator)
    return den
