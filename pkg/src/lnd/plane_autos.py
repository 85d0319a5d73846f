"""Automorphisms of K[y,z] with K = Q or Q(x), and their triangular/swap words.

A map is stored by the images (P, Q) of (y, z) and read as a point map, so
``compose(a, b)`` applies b first: its images are a's images evaluated at
b's images.  Words list factors in the order they are applied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InputError, NotAnAutomorphism, RingMismatch
from .poly import Polynomial, Ring, weighted_leading_form
from .poly.ratfunc import from_flat

PLANE = ("y", "z")
PLANE_Q = Ring(PLANE)
PLANE_QX = Ring(PLANE, "x")


def plane_ring(field: str = "Q") -> Ring:
    return Ring.parse(",".join(PLANE), field)


def to_plane(p: Polynomial, field: str | None = None) -> Polynomial:
    """Move a polynomial in (x, y, z), or one already in K[y, z], into K[y, z]."""
    if p.ring.names == PLANE:
        if field is None or p.ring.field == field:
            return p
        target = plane_ring(field)
        if field == "Q":
            if not all(c.is_constant() for _, c in p.items()):
                raise RingMismatch(f"{p} has non-constant coefficients in x")
            return Polynomial(target, {m: c.constant() for m, c in p.items()})
        return Polynomial(target, {m: target.coerce(c) for m, c in p.items()})
    if field is None:
        field = "Q(x)" if p.ring.has("x") and p.involves("x") else "Q"
    flat = Ring(("x",) + PLANE)
    q = p.embed(flat)
    if field == "Q":
        if q.involves("x"):
            raise RingMismatch(f"{p} involves x; use the Q(x) plane")
        return _drop_x(q, PLANE_Q)
    return from_flat(q, PLANE_QX)


def _drop_x(p: Polynomial, target: Ring) -> Polynomial:
    idx = [p.ring.index(n) for n in PLANE]
    out = {}
    for m, c in p.items():
        e = p.ring.unpack(m)
        out[target.pack([e[i] for i in idx])] = c
    return Polynomial(target, out)


def from_plane(p: Polynomial, ring: Ring) -> Polynomial:
    """Back from K[y, z] to a ring containing x, y, z; x-denominators must be 1."""
    if p.ring.coeff_var is None:
        return p.embed(ring)
    out = ring.zero
    x = ring.var("x")
    for exps, c in p.terms():
        if not c.is_polynomial():
            raise RingMismatch(f"coefficient {c} of {p} is not a polynomial in x")
        coef = c.numerator.compose([x], ring)
        out = out + coef * ring.var("y") ** exps[0] * ring.var("z") ** exps[1]
    return out


def _degree(p: Polynomial) -> int:
    return p.degree()


@dataclass(frozen=True)
class PlaneAutomorphism:
    ring: Ring
    P: Polynomial
    Q: Polynomial

    def __post_init__(self):
        if self.ring.names != PLANE:
            raise InputError(f"plane maps live in K[y,z], not {self.ring}")
        for im in (self.P, self.Q):
            if im.ring != self.ring:
                raise RingMismatch(f"image {im} is not in {self.ring}")

    @classmethod
    def of(cls, P, Q, field: str = "Q"):
        r = plane_ring(field)
        P = r(P) if isinstance(P, str) else to_plane(P, field)
        Q = r(Q) if isinstance(Q, str) else to_plane(Q, field)
        return cls(r, P, Q)

    @classmethod
    def identity(cls, ring: Ring = PLANE_Q):
        return cls(ring, ring.var("y"), ring.var("z"))

    @classmethod
    def swap(cls, ring: Ring = PLANE_Q):
        return cls(ring, ring.var("z"), ring.var("y"))

    @property
    def field(self) -> str:
        return self.ring.field

    def images(self):
        return (self.P, self.Q)

    def is_identity(self) -> bool:
        return self.P == self.ring.var("y") and self.Q == self.ring.var("z")

    def __call__(self, p: Polynomial) -> Polynomial:
        """Substitute the images into p (p evaluated along the map)."""
        return p.compose([self.P, self.Q], self.ring)

    def __str__(self):
        return f"(y, z) -> ({self.P}, {self.Q})"

    def to_dict(self):
        return {"field": self.field, "y": str(self.P), "z": str(self.Q)}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls.of(d["y"], d["z"], d.get("field", "Q"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed automorphism: {exc}") from exc


def compose(a: PlaneAutomorphism, b: PlaneAutomorphism) -> PlaneAutomorphism:
    """a after b."""
    if a.ring != b.ring:
        raise RingMismatch(f"cannot compose maps over {a.field} and {b.field}")
    return PlaneAutomorphism(a.ring, b(a.P), b(a.Q))


# words


@dataclass(frozen=True)
class Triangular:
    """(y, z) -> (u*y + c, v*z + F(y)) with u, v nonzero constants of K."""

    ring: Ring
    u: object
    v: object
    F: Polynomial
    c: object = 0

    def __post_init__(self):
        r = self.ring
        object.__setattr__(self, "u", r.coerce(self.u))
        object.__setattr__(self, "v", r.coerce(self.v))
        object.__setattr__(self, "c", r.coerce(self.c))
        if not self.u or not self.v:
            raise NotAnAutomorphism("triangular factor with a zero diagonal entry")
        if self.F.ring != r or self.F.involves("z"):
            raise InputError(f"triangular part {self.F} must be a polynomial in y over K")

    @classmethod
    def identity(cls, ring: Ring):
        return cls(ring, 1, 1, ring.zero)

    def as_map(self) -> PlaneAutomorphism:
        r = self.ring
        y, z = r.var("y"), r.var("z")
        return PlaneAutomorphism(r, y * self.u + self.c, z * self.v + self.F)

    def is_affine(self) -> bool:
        return self.F.degree() <= 1

    def is_identity(self) -> bool:
        return self.as_map().is_identity()

    def inverse(self) -> "Triangular":
        r = self.ring
        one = r.cone
        ui = one / self.u
        vi = one / self.v
        y = r.var("y")
        back = y * ui + (-self.c * ui)
        F = -(self.F.compose([back, r.var("z")], r)) * vi
        return Triangular(r, ui, vi, F, -self.c * ui)

    @classmethod
    def from_map(cls, a: PlaneAutomorphism) -> "Triangular":
        r = a.ring
        P, Q = a.P, a.Q
        if P.degree() != 1 or P.involves("z"):
            raise InputError(f"{a} is not triangular")
        u = P.coeff((1, 0))
        c = P.constant_coeff()
        v = Q.coeff((0, 1))
        F = Q - r.var("z") * v
        if F.involves("z") or not v:
            raise InputError(f"{a} is not triangular")
        return cls(r, u, v, F, c)

    def to_dict(self):
        r = self.ring
        return {"u": str(r.const(self.u)), "v": str(r.const(self.v)), "c": str(r.const(self.c)), "F": str(self.F)}

    @classmethod
    def from_dict(cls, ring: Ring, d):
        def const(s):
            p = ring(str(s))
            if not p.is_constant():
                raise InputError(f"{s!r} is not a constant of {ring.field}")
            return p.constant_coeff()

        return cls(ring, const(d.get("u", "1")), const(d.get("v", "1")), ring(str(d.get("F", "0"))),
                   const(d.get("c", "0")))


SWAP = "swap"


@dataclass(frozen=True)
class DecompositionWord:
    """Factors in application order: [tau_0, swap, tau_1, ..., swap, tau_m]."""

    ring: Ring
    factors: tuple

    @property
    def swap_count(self) -> int:
        return sum(1 for f in self.factors if f == SWAP)

    def triangles(self):
        return [f for f in self.factors if f != SWAP]

    def recompose(self) -> PlaneAutomorphism:
        result = PlaneAutomorphism.identity(self.ring)
        sw = PlaneAutomorphism.swap(self.ring)
        for f in self.factors:
            result = compose(sw if f == SWAP else f.as_map(), result)
        return result

    def is_reduced(self) -> bool:
        fs = self.factors
        if not fs or fs[0] == SWAP or fs[-1] == SWAP:
            return False
        for a, b in zip(fs, fs[1:]):
            if (a == SWAP) == (b == SWAP):
                return False
        tris = self.triangles()
        return all(not t.is_affine() for t in tris[1:-1])

    def to_list(self):
        return [SWAP if f == SWAP else {"tri": f.to_dict()} for f in self.factors]

    def to_dict(self):
        return {"field": self.ring.field, "word": self.to_list(), "swap_count": self.swap_count}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d, field: str | None = None):
        if isinstance(d, list):
            items, fld = d, field or "Q"
        else:
            items, fld = d["word"], d.get("field", field or "Q")
        ring = plane_ring(fld)
        out = []
        for it in items:
            if it == SWAP:
                out.append(SWAP)
            elif isinstance(it, dict) and "tri" in it:
                out.append(Triangular.from_dict(ring, it["tri"]))
            else:
                raise InputError(f"unknown word factor {it!r}")
        return cls(ring, tuple(out))


def _affine_parts(a: PlaneAutomorphism):
    P, Q = a.P, a.Q
    a11, a12, b1 = P.coeff((1, 0)), P.coeff((0, 1)), P.constant_coeff()
    a21, a22, b2 = Q.coeff((1, 0)), Q.coeff((0, 1)), Q.constant_coeff()
    return a11, a12, b1, a21, a22, b2


def _affine_word(a: PlaneAutomorphism) -> list:
    """An affine map as [tau] or [tau'', swap, tau'] in application order."""
    r = a.ring
    a11, a12, b1, a21, a22, b2 = _affine_parts(a)
    det = a11 * a22 - a12 * a21
    if not det:
        raise NotAnAutomorphism(f"affine part of {a} is singular")
    y = r.var("y")
    if not a12:
        return [Triangular(r, a11, a22, y * a21 + b2, b1)]
    first = Triangular(r, 1, a12, y * a11 + b1)
    f1 = a22 / a12
    last = Triangular(r, 1, -det / a12, y * f1 + (b2 - f1 * b1))
    return [first, SWAP, last]


def _merge(s: Triangular, t: Triangular) -> Triangular:
    """The single triangle equal to t after s."""
    return Triangular.from_map(compose(t.as_map(), s.as_map()))


def reduce_word(ring: Ring, factors) -> DecompositionWord:
    fs = list(factors)
    changed = True
    while changed:
        changed = False
        out = []
        for f in fs:
            if out and f == SWAP and out[-1] == SWAP:
                out.pop()
                changed = True
            elif out and f != SWAP and out[-1] != SWAP:
                out[-1] = _merge(out[-1], f)
                changed = True
            else:
                out.append(f)
        fs = out
        # an affine triangle between two swaps collapses to at most one swap
        for i in range(1, len(fs) - 1):
            t = fs[i]
            if t != SWAP and fs[i - 1] == SWAP and fs[i + 1] == SWAP and t.is_affine():
                sw = PlaneAutomorphism.swap(ring)
                inner = compose(sw, compose(t.as_map(), sw))
                fs = fs[:i - 1] + _affine_word(inner) + fs[i + 2:]
                changed = True
                break
    if not fs or fs[0] == SWAP:
        fs.insert(0, Triangular.identity(ring))
    if fs[-1] == SWAP:
        fs.append(Triangular.identity(ring))
    return DecompositionWord(ring, tuple(fs))


def decompose_tame(a: PlaneAutomorphism, check: bool = True) -> DecompositionWord:
    """Reduced triangular/swap word for a, by degree-reduction peeling."""
    r = a.ring
    P, Q = a.P, a.Q
    left = []  # factors applied after the remaining map, innermost first
    y = r.var("y")
    while True:
        dp, dq = _degree(P), _degree(Q)
        if dp < 1 or dq < 1:
            raise NotAnAutomorphism(f"{a} has a constant component")
        if dp == 1 and dq == 1:
            break
        if dp > dq:
            P, Q = Q, P
            left.append(SWAP)
            continue
        lp, _ = weighted_leading_form(P, (1, 1), PLANE)
        lq, _ = weighted_leading_form(Q, (1, 1), PLANE)
        if dq % dp:
            raise NotAnAutomorphism(f"{a}: leading forms of degrees {dp}, {dq} are not powers of each other")
        e = dq // dp
        le = lp ** e
        coef = lq.leading_coeff() / le.leading_coeff()
        if lq != le * coef:
            raise NotAnAutomorphism(f"{a}: leading form {lq} is not a multiple of ({lp})^{e}")
        Q = Q - P ** e * coef
        # (P, Q_old) = (y, z + coef*y^e) after (P, Q_new)
        left.append(Triangular(r, 1, 1, y ** e * coef))
    base = _affine_word(PlaneAutomorphism(r, P, Q))
    word = reduce_word(r, base + left[::-1])
    if check and word.recompose() != a:
        raise NotAnAutomorphism(f"decomposition of {a} does not recompose")
    return word


def invert(word: DecompositionWord) -> PlaneAutomorphism:
    inv = [SWAP if f == SWAP else f.inverse() for f in reversed(word.factors)]
    return DecompositionWord(word.ring, tuple(inv)).recompose()


def invert_map(a: PlaneAutomorphism) -> PlaneAutomorphism:
    return invert(decompose_tame(a))


def level_from_word(word: DecompositionWord) -> int:
    if not word.is_reduced():
        raise InputError("level is defined on reduced words")
    m = word.swap_count
    if m == 0:
        return 2
    if m == 1 and word.factors[0].F.degree() <= 0:
        return 1
    return m + 2


def level(a: PlaneAutomorphism) -> int:
    return level_from_word(decompose_tame(a))


def psi_representative(f_ker: Polynomial, slice_: Polynomial, slice_value=1, derivation=None,
                       field: str | None = None) -> PlaneAutomorphism:
    """The coset representative (f_ker, slice/slice_value), validated by decomposition."""
    if derivation is not None:
        from .derivations import apply

        if apply(derivation, f_ker):
            raise NotAnAutomorphism(f"the derivation does not kill {f_ker}")
        sv = slice_value if isinstance(slice_value, Polynomial) else derivation.ring.const(slice_value)
        if apply(derivation, slice_) != sv:
            raise NotAnAutomorphism(f"the derivation does not send {slice_} to {slice_value}")
    if field is None:
        involves_x = any(isinstance(p, Polynomial) and "x" in p.ring.names and p.involves("x")
                         for p in (f_ker, slice_, slice_value))
        field = "Q(x)" if involves_x else "Q"
    ring = plane_ring(field)
    f = to_plane(f_ker, field)
    g = to_plane(slice_, field)
    if isinstance(slice_value, Polynomial):
        sv = to_plane(slice_value, field)
        if not sv.is_constant() or not sv:
            raise InputError("slice value must be a nonzero element of K")
        sv = sv.constant_coeff()
    else:
        sv = ring.coerce(slice_value)
    a = PlaneAutomorphism(ring, f, g * (ring.cone / sv))
    decompose_tame(a)
    return a


def _polynomial_coeffs(p: Polynomial) -> bool:
    if p.ring.coeff_var is None:
        return True
    return all(c.is_polynomial() for _, c in p.items())


def is_B_automorphism(a: PlaneAutomorphism) -> bool:
    """Do the map and its inverse both have coefficients in Q[x]?"""
    word = decompose_tame(a)
    if not (_polynomial_coeffs(a.P) and _polynomial_coeffs(a.Q)):
        return False
    inv = invert(word)
    return _polynomial_coeffs(inv.P) and _polynomial_coeffs(inv.Q)
