"""Derived polynomial functionals: weighted leading forms, linear parts, x-content."""

from __future__ import annotations

from ..errors import InputError
from .gcd import gcd_many
from .polynomial import Polynomial
from .ring import MASK, SHIFT


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    return p.diff(var)


def substitute(p: Polynomial, bindings: dict, ring=None) -> Polynomial:
    """Simultaneous substitution; constants and strings are accepted as values."""
    target = ring
    if target is None:
        rings = {v.ring for v in bindings.values() if isinstance(v, Polynomial)}
        target = rings.pop() if len(rings) == 1 else p.ring
    vals = {k: (target(v) if isinstance(v, str) else v) for k, v in bindings.items()}
    return p.subs(vals, target)


def weighted_degree(p: Polynomial, weights, variables=("y", "z")) -> int:
    return weighted_leading_form(p, weights, variables)[1]


def weighted_leading_form(p: Polynomial, weights, variables=("y", "z")):
    """Top weighted-homogeneous component and its degree.

    ``weights`` pairs with ``variables``; every other variable has weight 0.
    """
    if not p:
        raise InputError("weighted leading form of the zero polynomial")
    weights = tuple(int(w) for w in weights)
    if len(weights) != len(variables):
        raise InputError("one weight per graded variable")
    if any(w < 0 for w in weights) or not any(weights):
        raise InputError("weights must be nonnegative and not all zero")
    r = p.ring
    shifts = [SHIFT * r.index(v) for v in variables]

    def wdeg(m):
        return sum(w * ((m >> s) & MASK) for w, s in zip(weights, shifts))

    top = max(wdeg(m) for m in p._t)
    return Polynomial(r, {m: c for m, c in p._t.items() if wdeg(m) == top}), top


def linear_part(p: Polynomial, variables=("y", "z")) -> Polynomial:
    """Sum of the terms of total degree exactly 1 in ``variables``."""
    r = p.ring
    shifts = [SHIFT * r.index(v) for v in variables]
    return Polynomial(r, {m: c for m, c in p._t.items()
                          if sum((m >> s) & MASK for s in shifts) == 1})


def content_in_x(p: Polynomial, variables=("y", "z")) -> Polynomial:
    """gcd of the coefficients of p as a polynomial in ``variables``.

    The coefficients live in the remaining variables (normally just x).  The
    result is normalized like any gcd; the zero polynomial has content 0.
    """
    if not p:
        return p.ring.zero
    return gcd_many(p.split(tuple(variables)).values())


def is_primitive(p: Polynomial, variables=("y", "z")) -> bool:
    return bool(p) and content_in_x(p, variables).is_constant()


def linear_part_and_content(p: Polynomial, variables=("y", "z")):
    """(L(p), d(p)): linear part in ``variables`` and the x-content of p.

    A zero d signals that p itself was zero.
    """
    return linear_part(p, variables), content_in_x(p, variables)
