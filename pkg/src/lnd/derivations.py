"""Derivations of polynomial rings given by the images of the variables."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

from .certificates import Certificate, Check, register
from .errors import CapExceeded, ConditionFailed, InputError, NotUnivariate, RingMismatch
from .poly import B, Polynomial, RationalFunction, Ring, gcd_many, gcd_poly

DEFAULT_CAP = 64


def default_cap() -> int:
    raw = os.environ.get("LND_DEFAULT_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"LND_DEFAULT_CAP must be a positive integer, got {raw!r}") from None
    if cap <= 0:
        raise InputError(f"LND_DEFAULT_CAP must be a positive integer, got {raw!r}")
    return cap


@dataclass(frozen=True)
class Derivation:
    """A derivation fixing the coefficients, determined by ``images[i] = D(var_i)``."""

    ring: Ring
    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if len(imgs) != self.ring.nvars:
            raise InputError(f"need {self.ring.nvars} images, got {len(imgs)}")
        fixed = []
        for im in imgs:
            if not isinstance(im, Polynomial):
                im = self.ring.const(im)
            elif im.ring != self.ring:
                raise RingMismatch(f"image {im} is not in {self.ring}")
            fixed.append(im)
        object.__setattr__(self, "images", tuple(fixed))

    @classmethod
    def from_map(cls, ring: Ring, images: dict):
        """Images keyed by variable name; missing variables map to 0."""
        for k in images:
            ring.index(k)
        vals = []
        for n in ring.names:
            v = images.get(n, 0)
            vals.append(ring(v) if isinstance(v, str) else v)
        return cls(ring, tuple(vals))

    @classmethod
    def partial(cls, ring: Ring, var: str):
        return cls.from_map(ring, {var: 1})

    @classmethod
    def zero(cls, ring: Ring):
        return cls(ring, (ring.zero,) * ring.nvars)

    def __call__(self, p):
        return apply(self, p)

    def image(self, var: str) -> Polynomial:
        return self.images[self.ring.index(var)]

    @property
    def is_zero(self) -> bool:
        return not any(self.images)

    def __add__(self, other):
        _same_ring(self, other)
        return Derivation(self.ring, tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other):
        _same_ring(self, other)
        return Derivation(self.ring, tuple(a - b for a, b in zip(self.images, other.images)))

    def __neg__(self):
        return Derivation(self.ring, tuple(-a for a in self.images))

    def scale(self, h) -> "Derivation":
        """The derivation h*D (no kernel check; see ``replica``)."""
        return Derivation(self.ring, tuple(h * a for a in self.images))

    def __str__(self):
        parts = [f"{n} -> {im}" for n, im in zip(self.ring.names, self.images)]
        return "D(" + ", ".join(parts) + ")"

    def to_dict(self):
        return {
            "ring": self.ring.spec(),
            "field": self.ring.field,
            "images": {n: str(im) for n, im in zip(self.ring.names, self.images)},
        }

    @classmethod
    def from_dict(cls, d):
        try:
            ring = Ring.parse(d["ring"], d.get("field", "Q"))
            return cls.from_map(ring, dict(d["images"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed derivation: {exc}") from exc

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _same_ring(D, E):
    if D.ring != E.ring:
        raise RingMismatch(f"derivations on different rings: {D.ring} vs {E.ring}")


def apply(D: Derivation, p: Polynomial) -> Polynomial:
    """Leibniz extension: sum of dp/dv * D(v)."""
    if not isinstance(p, Polynomial):
        return D.ring.zero
    if p.ring != D.ring:
        raise RingMismatch(f"{p} is not in {D.ring}")
    out = D.ring.zero
    for name, im in zip(D.ring.names, D.images):
        if im and p.involves(name):
            out = out + p.diff(name) * im
    return out


def deg_D(D: Derivation, p: Polynomial, cap: int | None = None) -> int:
    """The m with D^m(p) != 0 and D^(m+1)(p) = 0."""
    cap = default_cap() if cap is None else cap
    if not p:
        raise InputError("deg_D is undefined on 0")
    q = p
    for m in range(cap + 1):
        nxt = apply(D, q)
        if not nxt:
            return m
        q = nxt
    raise CapExceeded(f"D^{cap + 1}({p}) is still nonzero", cap=cap)


@dataclass
class NilpotencyCertificate:
    derivation: Derivation
    indices: dict
    cap: int

    @property
    def fingerprint(self) -> str:
        return self.derivation.fingerprint()

    def replay(self) -> bool:
        """Re-check D^n(v) = 0 and D^(n-1)(v) != 0 for every variable."""
        D = self.derivation
        for name in D.ring.names:
            n = self.indices[name]
            if n < 1 or n > self.cap:
                return False
            q = D.ring.var(name)
            for _ in range(n - 1):
                q = apply(D, q)
            if not q or apply(D, q):
                return False
        return True

    def to_certificate(self) -> Certificate:
        checks = [Check(f"nilpotent:{n}", True, {"index": self.indices[n]}) for n in self.derivation.ring.names]
        return Certificate(
            "nilpotency",
            {"derivation": self.derivation.to_dict(), "fingerprint": self.fingerprint},
            checks,
            {"indices": dict(self.indices), "cap": self.cap},
        )


def nilpotency_index(D: Derivation, p: Polynomial, cap: int) -> int | None:
    """Least n with D^n(p) = 0, or None if that takes more than cap steps."""
    q = p
    for n in range(1, cap + 1):
        q = apply(D, q)
        if not q:
            return n
    return None


def certify_lnd(D: Derivation, cap: int | None = None) -> NilpotencyCertificate:
    cap = default_cap() if cap is None else cap
    if cap <= 0:
        raise InputError("cap must be positive")
    indices = {}
    for name in D.ring.names:
        n = nilpotency_index(D, D.ring.var(name), cap)
        if n is None:
            raise CapExceeded(f"D^{cap}({name}) is still nonzero", variable=name, cap=cap)
        indices[name] = n
    return NilpotencyCertificate(D, indices, cap)


@register("nilpotency")
def _replay_nilpotency(subject, data):
    D = Derivation.from_dict(subject["derivation"])
    cap = int(data.get("cap", default_cap()))
    checks = []
    indices = {}
    for name in D.ring.names:
        n = nilpotency_index(D, D.ring.var(name), cap)
        indices[name] = n
        checks.append(Check(f"nilpotent:{name}", n is not None, {"index": n}))
    return Certificate("nilpotency", subject, checks, {"indices": indices, "cap": cap})


# constructions


def jacobian3(f: Polynomial, g: Polynomial) -> Derivation:
    """h -> det of the Jacobian matrix with rows (f, g, h), columns (x, y, z) in ring order."""
    r = f.ring
    if r.nvars != 3:
        raise InputError(f"jacobian3 needs a 3-variable ring, got {r}")
    if g.ring != r:
        raise RingMismatch("jacobian3 arguments live in different rings")
    a, b, c = r.names
    fx, fy, fz = f.diff(a), f.diff(b), f.diff(c)
    gx, gy, gz = g.diff(a), g.diff(b), g.diff(c)
    return Derivation(r, (fy * gz - fz * gy, fz * gx - fx * gz, fx * gy - fy * gx))


def jacobian2_over_R(F: Polynomial, alpha=None, plane=("y", "z")) -> Derivation:
    """alpha * Jac(F, .) in the plane variables, over the remaining ones.

    ``alpha`` is a polynomial in the same ring that must lie in the kernel of
    Jac(F, .), or a polynomial in a ring (x, t) meaning alpha(x, F).
    """
    r = F.ring
    ya, za = plane
    Fy, Fz = F.diff(ya), F.diff(za)
    if not Fy and not Fz:
        raise ConditionFailed("gcd", f"{F} does not involve the plane variables")
    g = gcd_poly(Fy, Fz)
    if not g.is_constant():
        raise ConditionFailed("gcd", f"gcd(dF/d{ya}, dF/d{za}) = {g} is not a unit", str(g))
    if alpha is None:
        alpha = r.one
    elif isinstance(alpha, Polynomial) and alpha.ring != r:
        # alpha(x, t) with t standing for F
        t = alpha.ring.names[-1]
        bind = {t: F}
        for n in alpha.ring.names[:-1]:
            if n == r.coeff_var:
                bind[n] = r.const(RationalFunction(n, [0, 1]))
            else:
                bind[n] = r.var(n)
        alpha = alpha.subs(bind, r)
    elif not isinstance(alpha, Polynomial):
        alpha = r.const(alpha)
    if Fy * alpha.diff(za) - Fz * alpha.diff(ya):
        raise ConditionFailed("kernel", f"alpha = {alpha} is not a function of {F} over the base")
    images = {n: r.zero for n in r.names}
    images[ya] = -alpha * Fz
    images[za] = alpha * Fy
    return Derivation.from_map(r, images)


def commutator(D: Derivation, E: Derivation) -> Derivation:
    _same_ring(D, E)
    return Derivation(D.ring, tuple(apply(D, e) - apply(E, d) for d, e in zip(D.images, E.images)))


@dataclass
class Verdict:
    """Boolean answer plus a witness (and, for relations, the failing variable)."""

    value: bool
    witness: object = None
    variable: str | None = None
    reason: str = ""

    def __bool__(self):
        return bool(self.value)


def is_irreducible(D: Derivation) -> Verdict:
    if D.is_zero:
        raise InputError("the zero derivation has no irreducibility status")
    g = gcd_many(D.images)
    return Verdict(g.is_constant(), g)


def equivalent_check(D: Derivation, E: Derivation) -> Verdict:
    _same_ring(D, E)
    if D.is_zero or E.is_zero:
        raise InputError("equivalence is defined for nonzero derivations")
    n = D.ring.nvars
    for i in range(n):
        for j in range(i + 1, n):
            minor = D.images[i] * E.images[j] - D.images[j] * E.images[i]
            if minor:
                return Verdict(False, minor, reason=f"minor ({D.ring.names[i]},{D.ring.names[j]})")
    return Verdict(True)


def replica(h: Polynomial, D: Derivation) -> Derivation:
    if not isinstance(h, Polynomial):
        h = D.ring.const(h)
    if apply(D, h):
        raise ConditionFailed("kernel", f"{h} is not in the kernel", str(apply(D, h)))
    return D.scale(h)


def _images(ring, alpha):
    if isinstance(alpha, dict):
        return [alpha[n] if isinstance(alpha[n], Polynomial) else ring(str(alpha[n])) for n in ring.names]
    out = []
    for a in alpha:
        out.append(a if isinstance(a, Polynomial) else ring(str(a)))
    if len(out) != ring.nvars:
        raise InputError(f"need {ring.nvars} images")
    return out


def conjugate(D: Derivation, alpha, alpha_inv) -> Derivation:
    """b -> alpha(D(alpha_inv(b))), where alpha(p) means p with alpha's images substituted."""
    r = D.ring
    A, Ai = _images(r, alpha), _images(r, alpha_inv)
    for name, a_inv_img in zip(r.names, Ai):
        if a_inv_img.compose(A, r) != r.var(name):
            raise ConditionFailed("inverse", f"the given maps are not mutually inverse at {name}")
    return Derivation(r, tuple(apply(D, ai).compose(A, r) for ai in Ai))


def build_commuting_partner(D: Derivation, x_var: str, g: Polynomial, cap: int | None = None) -> Derivation:
    """Jacobian partner E = Jac(x_var, g, .) of D, with x_var as the first column."""
    r = D.ring
    if r.nvars != 3:
        raise InputError("the commuting partner needs a 3-variable ring")
    xv = r.var(x_var)
    if apply(D, xv):
        raise ConditionFailed("kernel", f"D({x_var}) = {apply(D, xv)} is not 0", str(apply(D, xv)))
    dg = apply(D, g)
    if not dg:
        raise ConditionFailed("local-slice", f"D({g}) = 0, so {g} is not a local slice", "0")
    if dg.variables() - {x_var}:
        raise NotUnivariate(f"D(g) = {dg} is not a polynomial in {x_var} alone", str(dg))
    o1, o2 = [n for n in r.names if n != x_var]
    images = {x_var: r.zero, o1: -g.diff(o2), o2: g.diff(o1)}
    E = Derivation.from_map(r, images)
    if not commutator(D, E).is_zero:
        raise ConditionFailed("commute", "the partner does not commute with D")
    certify_lnd(E, cap)
    return E


def verify_linear_relation(a1, Ep: Derivation, a2, E: Derivation, b, D: Derivation) -> Verdict:
    """Check a1*Ep = a2*E + b*D on generators, and D(b) = 0."""
    r = D.ring
    _same_ring(Ep, E)
    _same_ring(E, D)
    a1, a2, b = (x if isinstance(x, Polynomial) else r.const(x) for x in (a1, a2, b))
    if not a1:
        raise InputError("a1 must be nonzero")
    for name, ep, e, d in zip(r.names, Ep.images, E.images, D.images):
        lhs = a1 * ep
        rhs = a2 * e + b * d
        if lhs != rhs:
            return Verdict(False, str(lhs - rhs), name, "relation fails")
    db = apply(D, b)
    if db:
        return Verdict(False, str(db), None, "b is not in the kernel of D")
    return Verdict(True)


def partials(ring: Ring = B):
    return tuple(Derivation.partial(ring, n) for n in ring.names)
