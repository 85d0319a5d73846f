"""Sparse multivariate polynomials with exact coefficients."""

from __future__ import annotations

import heapq

from ..errors import InputError, NotDivisible, RingMismatch
from .ring import MASK, SHIFT, Ring


class Polynomial:
    """Immutable sparse polynomial: ``{packed monomial: nonzero coefficient}``.

    Coefficients are ``mpq`` over Q and ``RationalFunction`` over Q(x).  The
    term map is canonical, so equality and hashing are structural.
    """

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self._t = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: Ring, items) -> "Polynomial":
        """Build from ``(exponent tuple, coefficient)`` pairs; repeats are summed."""
        acc = {}
        for exps, c in items:
            if len(exps) != ring.nvars:
                raise InputError(f"monomial {exps} does not match ring arity {ring.nvars}")
            m = ring.pack(exps)
            c = ring.coerce(c)
            acc[m] = acc[m] + c if m in acc else c
        return cls(ring, {m: c for m, c in acc.items() if c})

    # inspection

    def __bool__(self):
        return bool(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_coeff(self):
        return self._t.get(0, self.ring.coerce(0))

    def __len__(self):
        return len(self._t)

    def items(self):
        return self._t.items()

    def terms(self):
        """``(exponents, coefficient)`` pairs in descending monomial order."""
        r = self.ring
        for m in sorted(self._t, key=r.ordkey, reverse=True):
            yield r.unpack(m), self._t[m]

    def coeff(self, exps) -> object:
        return self._t.get(self.ring.pack(exps), self.ring.coerce(0))

    def leading(self):
        """(packed monomial, coefficient) of the graded-lex leading term."""
        if not self._t:
            raise InputError("zero polynomial has no leading term")
        m = max(self._t, key=self.ring.ordkey)
        return m, self._t[m]

    def leading_coeff(self):
        return self.leading()[1]

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self._t:
            return -1
        if var is None:
            return max(self.ring.mdeg(m) for m in self._t)
        s = SHIFT * self.ring.index(var)
        return max((m >> s) & MASK for m in self._t)

    def variables(self) -> set:
        seen = 0
        for m in self._t:
            seen |= m
        return {n for i, n in enumerate(self.ring.names) if (seen >> (SHIFT * i)) & MASK}

    def involves(self, var: str) -> bool:
        s = SHIFT * self.ring.index(var)
        return any((m >> s) & MASK for m in self._t)

    # arithmetic

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.coerce(other)
            if not c:
                return Polynomial(self.ring, {})
            return Polynomial(self.ring, {m: v * c for m, v in self._t.items()})
        other = self._lift(other)
        a, b = self._t, other._t
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (ma, ca), = a.items()
            return Polynomial(self.ring, {ma + mb: ca * cb for mb, cb in b.items()})
        out = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma + mb
                s = get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise InputError("polynomial exponent must be a nonnegative integer")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def __truediv__(self, other):
        """Division by a nonzero constant (use ``exact_div`` for polynomials)."""
        if isinstance(other, Polynomial):
            if other.is_constant() and other:
                other = other.constant_coeff()
            else:
                raise InputError("use exact_div to divide by a non-constant polynomial")
        c = self.ring.coerce(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        inv = self.ring.cone / c
        return self * inv

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._t == other._t
        try:
            return self._t == self.ring.const(other)._t
        except InputError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    # calculus and substitution

    def diff(self, var: str) -> "Polynomial":
        """Formal partial derivative.  Over Q(x), ``var`` may be x itself."""
        r = self.ring
        if r.coeff_var is not None and var == r.coeff_var:
            return Polynomial(r, {m: d for m, c in self._t.items() if (d := c.diff())})
        i = r.index(var)
        s = SHIFT * i
        unit = 1 << s
        out = {}
        for m, c in self._t.items():
            e = (m >> s) & MASK
            if e:
                out[m - unit] = c * e
        return Polynomial(r, out)

    def subs(self, bindings: dict, ring: Ring | None = None) -> "Polynomial":
        """Simultaneous substitution ``{name: Polynomial | constant}``.

        Unbound variables map to the same-named variable of the target ring,
        which defaults to the ring of the bound values (or ``self.ring``).
        """
        src = self.ring
        for name in bindings:
            src.index(name)
        if ring is None:
            rings = {v.ring for v in bindings.values() if isinstance(v, Polynomial)}
            if len(rings) > 1:
                raise RingMismatch("substitution values live in different rings")
            ring = rings.pop() if rings else src
        images = []
        for name in src.names:
            if name in bindings:
                v = bindings[name]
                images.append(v if isinstance(v, Polynomial) else ring.const(v))
            else:
                images.append(ring.var(name))
        return self.compose(images, ring)

    def compose(self, images, ring: Ring) -> "Polynomial":
        """Substitute ``images[i]`` (in ``ring``) for the i-th variable."""
        src = self.ring
        if src.coeff_var is not None and ring.coeff_var != src.coeff_var:
            raise RingMismatch("cannot substitute out of a rational-function coefficient ring")
        n = src.nvars
        if len(images) != n:
            raise InputError(f"expected {n} images, got {len(images)}")
        for img in images:
            if img.ring != ring:
                raise RingMismatch(f"image {img} is not in {ring}")
        powers = [[ring.one, img] for img in images]

        def power(i, e):
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * images[i])
            return cache[e]

        # group by the leading exponents so the last variable only costs
        # scalar multiples of cached powers, then one product per group
        last = n - 1
        groups = {}
        for m, c in self._t.items():
            head = m & ~(MASK << (SHIFT * last))
            groups.setdefault(head, []).append(((m >> (SHIFT * last)) & MASK, c))
        acc = {}
        for head, tail in groups.items():
            inner = {}
            for e, c in tail:
                for mm, cv in power(last, e)._t.items():
                    s = inner.get(mm)
                    inner[mm] = cv * c if s is None else s + cv * c
            term = Polynomial(ring, {m: c for m, c in inner.items() if c})
            for i in range(last):
                e = (head >> (SHIFT * i)) & MASK
                if e:
                    term = term * power(i, e)
            for mm, cv in term._t.items():
                s = acc.get(mm)
                acc[mm] = cv if s is None else s + cv
        return Polynomial(ring, {m: c for m, c in acc.items() if c})

    def embed(self, ring: Ring) -> "Polynomial":
        """Re-express in a ring whose variables include all of ours."""
        if ring == self.ring:
            return self
        idx = [ring.index(n) for n in self.ring.names]
        if ring.field != self.ring.field:
            raise RingMismatch(f"cannot embed {self.ring} into {ring}")
        out = {}
        for m, c in self._t.items():
            exps = self.ring.unpack(m)
            nm = 0
            for j, e in zip(idx, exps):
                nm |= e << (SHIFT * j)
            out[nm] = c
        return Polynomial(ring, out)

    def split(self, outer: tuple) -> dict:
        """View as a polynomial in ``outer`` variables over the others.

        Returns ``{outer exponent tuple: coefficient polynomial}`` where the
        coefficients stay in ``self.ring`` and do not involve ``outer``.
        """
        r = self.ring
        idx = [r.index(n) for n in outer]
        out = {}
        for m, c in self._t.items():
            key = tuple((m >> (SHIFT * i)) & MASK for i in idx)
            rest = m
            for i, e in zip(idx, key):
                rest -= e << (SHIFT * i)
            out.setdefault(key, {})[rest] = c
        return {k: Polynomial(r, t) for k, t in out.items()}

    def univariate(self, var: str) -> dict:
        """``{degree: coefficient polynomial}`` with respect to ``var``."""
        return {k[0]: v for k, v in self.split((var,)).items()}

    # division

    def divmod_by(self, g: "Polynomial"):
        """Multivariate division by a single divisor in graded-lex order.

        Returns ``(q, rem)`` with ``self = q*g + rem`` and no term of ``rem``
        divisible by the leading monomial of ``g``.
        """
        g = self._lift(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        r = self.ring
        ordkey = r.ordkey
        divides = r.divides
        gm, gc = g.leading()
        ginv = r.cone / gc
        gtail = [(m, c) for m, c in g._t.items() if m != gm]
        p = dict(self._t)
        heap = [-ordkey(m) for m in p]
        heapq.heapify(heap)
        unkey = (1 << r.ord_shift) - 1
        q = {}
        rem = {}
        while heap:
            m = (-heapq.heappop(heap)) & unkey
            c = p.pop(m, None)
            if c is None:
                continue
            if divides(gm, m):
                qm = m - gm
                qc = c * ginv
                q[qm] = qc
                for tm, tc in gtail:
                    nm = qm + tm
                    s = p.get(nm)
                    if s is None:
                        p[nm] = -qc * tc
                        heapq.heappush(heap, -ordkey(nm))
                    else:
                        s = s - qc * tc
                        if s:
                            p[nm] = s
                        else:
                            del p[nm]
            else:
                rem[m] = c
        return Polynomial(r, q), Polynomial(r, rem)

    # printing

    def __str__(self):
        from .parse import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.ring})"


def exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Return q with ``a == b*q``; raise NotDivisible otherwise."""
    if isinstance(b, Polynomial) and not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q, rem = a.divmod_by(b)
    if rem:
        raise NotDivisible(f"{b} does not divide {a}")
    return q


def divides(b: Polynomial, a: Polynomial) -> bool:
    return not a.divmod_by(b)[1]


def normal_form_mod_principal(p: Polynomial, g: Polynomial) -> Polynomial:
    """Remainder of p modulo the principal ideal (g); zero iff g divides p."""
    return p.divmod_by(g)[1]
