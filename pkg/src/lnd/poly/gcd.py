"""Polynomial gcd: recursive content / primitive part over a subresultant PRS.

A cheap exact coprimality test runs first.  For a variable v, specialize the
other variables at integer points where both leading coefficients in v stay
nonzero; the specialized gcd then has degree at least the v-degree of the true
gcd.  If every variable yields degree 0, the inputs are coprime.
"""

from __future__ import annotations

from functools import reduce

import gmpy2
from gmpy2 import mpq

from ..errors import InputError, RingMismatch
from .polynomial import Polynomial, exact_div
from .ring import MASK, SHIFT, Ring


# dense univariate helpers over Q (lists, low degree first)

def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def dense_divmod(a, b):
    a = list(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            c = c * inv
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def dense_gcd(a, b):
    """Monic gcd of two dense univariate polynomials over Q."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, dense_divmod(a, b)[1]
    if not a:
        return []
    inv = 1 / a[-1]
    return [c * inv for c in a]


def to_dense(p: Polynomial, var: str | None = None):
    """Coefficients of a polynomial involving at most ``var``."""
    r = p.ring
    var = var if var is not None else r.names[0]
    s = SHIFT * r.index(var)
    deg = p.degree(var)
    out = [mpq(0)] * (deg + 1)
    for m, c in p.items():
        e = (m >> s) & MASK
        if m != e << s:
            raise InputError(f"{p} is not univariate in {var}")
        out[e] = c
    return out


def from_dense(coeffs, ring: Ring, var: str | None = None) -> Polynomial:
    var = var if var is not None else ring.names[0]
    i = ring.index(var)
    return Polynomial(ring, {ring.unit_monomial(i, e): mpq(c) for e, c in enumerate(coeffs) if c})


def univariate_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd of two univariate polynomials (in the ring's first variable)."""
    g = dense_gcd(to_dense(a), to_dense(b))
    return from_dense(g, a.ring)


# normalization

def rational_content(p: Polynomial):
    """Positive rational c with p/c having coprime integer coefficients."""
    nums = 0
    dens = 1
    for c in p._t.values():
        nums = gmpy2.gcd(nums, c.numerator)
        dens = gmpy2.lcm(dens, c.denominator)
    return mpq(nums, dens) if nums else mpq(0)


def normalize(p: Polynomial) -> Polynomial:
    """Integer coefficients, content 1, positive graded-lex leading coefficient.

    Over Q(x) the leading coefficient is made 1 instead.
    """
    if not p:
        return p
    if p.ring.coeff_var is not None:
        return p / p.leading_coeff()
    c = rational_content(p)
    if p.leading_coeff() < 0:
        c = -c
    return p if c == 1 else p * (1 / c)


# recursive machinery

def _lc_in(p: Polynomial, var: str) -> Polynomial:
    u = p.univariate(var)
    return u[max(u)]


def _content_in(p: Polynomial, var: str) -> Polynomial:
    """gcd of the coefficients of p viewed as a polynomial in ``var``."""
    coeffs = sorted(p.univariate(var).values(), key=len)
    g = None
    for c in coeffs:
        g = normalize(c) if g is None else _gcd(g, c)
        if g.is_constant():
            return g
    return g


def _as_univ(p: Polynomial, var: str):
    u = p.univariate(var)
    d = max(u)
    return [u.get(i, p.ring.zero) for i in range(d + 1)]


def _from_univ(coeffs, var: str, ring: Ring) -> Polynomial:
    v = ring.var(var)
    out = ring.zero
    vp = ring.one
    for c in coeffs:
        if c:
            out = out + c * vp
        vp = vp * v
    return out


def _prem(a, b):
    """Pseudo-remainder of dense coefficient lists with polynomial entries."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        a = [x * lb for x in a[:i]]
        if c:
            for j in range(db):
                a[i - db + j] = a[i - db + j] - c * b[j]
    while a and not a[-1]:
        a.pop()
    return a


def _subresultant_gcd(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    """Primitive gcd in ``var`` of two polynomials primitive in ``var``."""
    ring = a.ring
    A, B = _as_univ(a, var), _as_univ(b, var)
    if len(A) < len(B):
        A, B = B, A
    g = h = ring.one
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return ring.one
        A = B
        divisor = g * h ** delta
        B = [exact_div(c, divisor) if c else c for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))
    res = _from_univ(B, var, ring)
    return exact_div(res, _content_in(res, var))


def _sample_points(ring: Ring, skip: int):
    seeds = (2, -3, 5, -7, 11, 13, -17, 19)
    for k in range(len(seeds)):
        yield [seeds[(i + k) % len(seeds)] + k for i in range(ring.nvars) if i != skip]


def coprime_by_specialization(a: Polynomial, b: Polynomial) -> bool:
    """True only when a and b provably have a constant gcd."""
    ring = a.ring
    common = a.variables() & b.variables()
    for var in ring.names:
        if var not in common:
            continue
        i = ring.index(var)
        la, lb = _lc_in(a, var), _lc_in(b, var)
        others = [n for n in ring.names if n != var]
        for pt in _sample_points(ring, i):
            bind = dict(zip(others, pt))
            if not la.subs(bind) or not lb.subs(bind):
                continue
            sa, sb = a.subs(bind), b.subs(bind)
            if len(dense_gcd(to_dense(sa, var), to_dense(sb, var))) > 1:
                return False
            break
        else:
            return False
    return True


def _monomial_gcd(m: Polynomial, b: Polynomial) -> Polynomial:
    ring = m.ring
    (mm, _), = m.items()
    out = 0
    for i in range(ring.nvars):
        s = SHIFT * i
        e = (mm >> s) & MASK
        if e:
            e = min([e] + [(t >> s) & MASK for t in b._t])
            out |= e << s
    return Polynomial(ring, {out: mpq(1)})


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    ring = a.ring
    if not a:
        return normalize(b)
    if not b:
        return normalize(a)
    if a.is_constant() or b.is_constant():
        return ring.one
    if len(a) == 1:
        return _monomial_gcd(a, b)
    if len(b) == 1:
        return _monomial_gcd(b, a)
    a, b = normalize(a), normalize(b)
    if a == b:
        return a
    if coprime_by_specialization(a, b):
        return ring.one
    va, vb = a.variables(), b.variables()
    var = max(va | vb, key=ring.index)
    if var not in va:
        return _gcd(a, _content_in(b, var))
    if var not in vb:
        return _gcd(_content_in(a, var), b)
    ca, cb = _content_in(a, var), _content_in(b, var)
    pa, pb = exact_div(a, ca), exact_div(b, cb)
    return normalize(_gcd(ca, cb) * _subresultant_gcd(pa, pb, var))


def gcd_poly(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd with integer content 1 and positive graded-lex leading coefficient.

    Over Q(x) the result is computed in Q[x, ...] and its x-content removed.
    """
    if a.ring != b.ring:
        raise RingMismatch(f"ring mismatch: {a.ring} vs {b.ring}")
    if not a and not b:
        raise InputError("gcd of two zero polynomials is undefined")
    ring = a.ring
    if ring.coeff_var is None:
        return _gcd(a, b)
    from .ratfunc import clear_denominators, from_flat

    flat = Ring((ring.coeff_var,) + ring.names)
    fa, fb = clear_denominators(a, flat), clear_denominators(b, flat)
    g = _gcd(fa, fb)
    if g.involves(ring.coeff_var) and len(ring.names):
        g = exact_div(g, _content_over(g, ring.names))
    return normalize(from_flat(g, ring))


def _content_over(p: Polynomial, outer) -> Polynomial:
    return reduce(_gcd, sorted(p.split(tuple(outer)).values(), key=len))


def gcd_many(polys) -> Polynomial:
    polys = [p for p in polys if p]
    if not polys:
        raise InputError("gcd of zero polynomials is undefined")
    g = None
    for p in sorted(polys, key=len):
        g = normalize(p) if g is None else gcd_poly(g, p)
        if g.is_constant():
            break
    return g


def lcm_poly(a: Polynomial, b: Polynomial) -> Polynomial:
    return normalize(exact_div(a * b, gcd_poly(a, b)))
