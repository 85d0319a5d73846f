"""Generators of new derivations: commuting sums, chains from plane words,
local slice constructions, and the two parametric families."""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from .certificates import Certificate, Check, register
from .derivations import (
    Derivation,
    apply,
    certify_lnd,
    commutator,
    deg_D,
    equivalent_check,
    is_irreducible,
    jacobian3,
    verify_linear_relation,
)
from .errors import ConditionFailed, InputError, NotDivisible, NotFoundWithinBounds
from .linalg import poly_span_solver
from .plane_autos import (
    SWAP,
    DecompositionWord,
    PlaneAutomorphism,
    compose,
    decompose_tame,
    plane_ring,
)
from .poly import (
    B,
    Polynomial,
    Ring,
    denominator_lcm,
    exact_div,
    gcd_many,
    gcd_poly,
    lcm_poly,
    normal_form_mod_principal,
)

PHI_RING = Ring(("f", "r"))
P_RING = Ring(("f",))
PARAM_RING = Ring(("t1", "t2"))
H_RING = Ring(("x", "t"))


# commuting sums


def c_construction(deltas, fs, generators=None, cap: int | None = None):
    """Delta = sum f_i*delta_i with the explicit nilpotency bound per generator.

    Returns (Delta, bound, per_generator) where bound is the maximum over the
    generators.  The l_j are computed from the last index down, since each
    one depends on the later ones.
    """
    deltas, fs = list(deltas), list(fs)
    if len(deltas) != len(fs) or not deltas:
        raise InputError("need one coefficient per derivation")
    ring = deltas[0].ring
    fs = [f if isinstance(f, Polynomial) else ring.const(f) for f in fs]
    for i, d in enumerate(deltas):
        for j in range(i + 1, len(deltas)):
            if not commutator(d, deltas[j]).is_zero:
                raise ConditionFailed("commute", f"derivations {i + 1} and {j + 1} do not commute", [i + 1, j + 1])
    m = len(deltas)
    for k, f in enumerate(fs):
        for i in range(k, m):
            if apply(deltas[i], f):
                raise ConditionFailed("kernel", f"f_{k + 1} = {f} is not killed by derivation {i + 1}", k + 1)
    Delta = Derivation.zero(ring)
    for d, f in zip(deltas, fs):
        Delta = Delta + d.scale(f)
    gens = generators if generators is not None else ring.gens()
    per = {}
    for g in gens:
        ls = [0] * m
        for j in range(m - 1, -1, -1):
            prod = g
            for i in range(j + 1, m):
                prod = prod * fs[i] ** ls[i]
            ls[j] = deg_D(deltas[j], prod, cap) + 1 if prod else 1
        e = sum(ls) - m + 1
        q = g
        for _ in range(e):
            q = apply(Delta, q)
        if q:
            raise ConditionFailed("bound", f"Delta^{e}({g}) is not zero", str(g))
        per[str(g)] = {"l": ls, "e": e}
    bound = max(v["e"] for v in per.values()) if per else 0
    return Delta, bound, per


# chains from plane words


@dataclass
class MCChain:
    derivations: list
    witnesses: dict = field(default_factory=dict)  # i -> (h, sigma, f), 1-based i >= 3
    word: DecompositionWord | None = None

    def __len__(self):
        return len(self.derivations)

    @property
    def last(self) -> Derivation:
        return self.derivations[-1]

    def checks(self):
        out = []
        ds = self.derivations
        ring = ds[0].ring
        firsts = [Derivation.partial(ring, "y"), Derivation.partial(ring, "z")]
        out.append(Check("starts-with-partials", ds[:2] == firsts[:len(ds[:2])], None))
        for i in range(3, len(ds) + 1):
            h, s, f = self.witnesses[i]
            ok = verify_linear_relation(h, ds[i - 1], f, ds[i - 3], s, ds[i - 2])
            base = not (h.variables() - {"x"}) and not (f.variables() - {"x"}) and bool(h) and bool(f)
            out.append(Check(f"relation:{i}", bool(ok) and base,
                             {"h": str(h), "sigma": str(s), "f": str(f), "failing": ok.variable}))
        for i in range(len(ds) - 1):
            out.append(Check(f"commute:{i + 1},{i + 2}", commutator(ds[i], ds[i + 1]).is_zero, None))
        for i, d in enumerate(ds):
            v = is_irreducible(d)
            out.append(Check(f"irreducible:{i + 1}", v.value, str(v.witness)))
        return out

    def validate(self):
        bad = [c for c in self.checks() if not c.passed]
        if bad:
            raise ConditionFailed(bad[0].name, "chain invariant fails", bad[0].witness)
        return True

    def to_certificate(self) -> Certificate:
        subject = {"word": self.word.to_dict() if self.word else None}
        data = {
            "derivations": [d.to_dict() for d in self.derivations],
            "relations": {str(i): {"h": str(h), "sigma": str(s), "f": str(f)}
                          for i, (h, s, f) in sorted(self.witnesses.items())},
        }
        return Certificate("mcchain", subject, self.checks(), data)


def _normalize_derivation(images, ring: Ring):
    """Clear x-denominators, divide by the gcd of the images, fix content and sign."""
    from .plane_autos import from_plane
    from .poly.ratfunc import RationalFunction

    lcm = None
    for p in images:
        if p and p.ring.coeff_var is not None:
            d = denominator_lcm(p)
            lcm = d if lcm is None else lcm_poly(lcm, d)
    if lcm is not None:
        scale = RationalFunction.coerce(lcm, "x")
        images = [p * scale for p in images]
    cleared = [from_plane(p, ring) for p in images]
    g = gcd_many([p for p in cleared if p])
    cleared = [exact_div(p, g) if p else p for p in cleared]
    c = _joint_content(cleared)
    if next(p for p in cleared if p).leading_coeff() < 0:
        c = -c
    return [p * (1 / c) for p in cleared]


def _joint_content(polys):
    num, den = 0, 1
    for p in polys:
        for _, c in p.items():
            num = gmpy2.gcd(num, c.numerator)
            den = gmpy2.lcm(den, c.denominator)
    return mpq(num, den)


def _plane_derivation(beta: PlaneAutomorphism):
    """The derivation killing beta's first image and sending its second to 1."""
    f, g = beta.P, beta.Q
    J = f.diff("y") * g.diff("z") - f.diff("z") * g.diff("y")
    if not J.is_constant() or not J:
        raise ConditionFailed("jacobian", f"{beta} has non-constant Jacobian {J}")
    inv = beta.ring.cone / J.constant_coeff()
    return [-f.diff("z") * inv, f.diff("y") * inv]


def _relation(a: Derivation, b: Derivation, c: Derivation):
    """(h, sigma, f) with h*c = sigma*a + f*b, reduced by the common gcd."""
    def det(u, v):
        return u.image("y") * v.image("z") - u.image("z") * v.image("y")

    h = det(a, b)
    sigma = det(c, b)
    f = det(a, c)
    g = gcd_many([p for p in (h, sigma, f) if p])
    h, sigma, f = (exact_div(p, g) if p else p for p in (h, sigma, f))
    if h.leading_coeff() < 0:
        h, sigma, f = -h, -sigma, -f
    return h, sigma, f


def mc_chain_from_word(word: DecompositionWord, ambient: Ring = B, validate: bool = True) -> MCChain:
    """Full chain d_1 = d/dy, d_2 = d/dz, ..., one step per swap of the word."""
    from .plane_autos import level_from_word

    ring = word.ring
    dy = Derivation.partial(ambient, "y")
    dz = Derivation.partial(ambient, "z")
    if level_from_word(word) == 1:
        chain = MCChain([dy], {}, word)
        return chain
    ds = [dy, dz]
    prefix = PlaneAutomorphism.identity(ring)
    sw = PlaneAutomorphism.swap(ring)
    fs = list(word.factors)
    # apply factors up to each swap; each prefix ending in a swap gives one step
    for fct in fs:
        if fct == SWAP:
            prefix = compose(sw, prefix)
            imgs = _normalize_derivation(_plane_derivation(prefix), ambient)
            ds.append(Derivation.from_map(ambient, {"y": imgs[0], "z": imgs[1]}))
        else:
            prefix = compose(fct.as_map(), prefix)
    witnesses = {}
    for i in range(3, len(ds) + 1):
        witnesses[i] = _relation(ds[i - 2], ds[i - 3], ds[i - 1])
    chain = MCChain(ds, witnesses, word)
    if validate:
        chain.validate()
    return chain


# local slice constructions


def _nf_powers(p: Polynomial, g: Polynomial, n: int):
    out = [normal_form_mod_principal(p.ring.one, g)]
    base = normal_form_mod_principal(p, g)
    for _ in range(n):
        out.append(normal_form_mod_principal(out[-1] * base, g))
    return out


def minimal_phi_search(f: Polynomial, g: Polynomial, r: Polynomial, deg_cap: int = 6,
                       coeff_deg_cap: int | None = None):
    """Least-degree monic phi(f, r) with phi(f, r) in gB, within the caps.

    Returns (phi, record) where phi lives in Q[f, r] and record notes the caps
    and the degrees shown infeasible.
    """
    if not g:
        raise InputError("g must be nonzero")
    if deg_cap <= 0:
        raise InputError("caps must be positive")
    coeff_deg_cap = 3 * deg_cap if coeff_deg_cap is None else coeff_deg_cap
    if coeff_deg_cap < 0:
        raise InputError("caps must be positive")
    fpow = _nf_powers(f, g, coeff_deg_cap)
    rpow = _nf_powers(r, g, deg_cap)
    ring = f.ring
    solver = poly_span_solver(ring)
    infeasible = []
    for d in range(1, deg_cap + 1):
        j = d - 1
        for k in range(coeff_deg_cap + 1):
            solver.add(normal_form_mod_principal(fpow[k] * rpow[j], g)._t, (j, k))
        sol = solver.solve((-rpow[d])._t)
        if sol is None:
            infeasible.append(d)
            continue
        fv, rv = PHI_RING.var("f"), PHI_RING.var("r")
        phi = rv ** d
        for (jj, kk), c in sorted(sol.items()):
            phi = phi + fv ** kk * rv ** jj * c
        return phi, {"deg_cap": deg_cap, "coeff_deg_cap": coeff_deg_cap, "degree": d, "infeasible": infeasible}
    raise NotFoundWithinBounds(f"no phi of r-degree <= {deg_cap} with coefficient degree <= {coeff_deg_cap}")


def eval_fr(phi: Polynomial, f: Polynomial, r: Polynomial) -> Polynomial:
    return phi.compose([f, r], f.ring)


def express_in_powers(q: Polynomial, f: Polynomial):
    """P in Q[f] with q = P(f), or None."""
    if not f or f.is_constant():
        return None
    if not q:
        return P_RING.zero
    top = q.degree() // max(f.degree(), 1)
    solver = poly_span_solver(q.ring)
    p = q.ring.one
    for k in range(top + 1):
        solver.add(p._t, k)
        p = p * f
    sol = solver.solve(q._t)
    if sol is None:
        return None
    fv = P_RING.var("f")
    out = P_RING.zero
    for k, c in sol.items():
        out = out + fv ** k * c
    return out


@dataclass
class SliceConstruction:
    h: Polynomial
    delta: Derivation
    phi: Polynomial
    P: Polynomial
    scalar: object
    phi_record: dict
    certificate: object = None


def jacobian_scalar(D: Derivation, f: Polynomial, g: Polynomial):
    """The rational lam with D = lam * Jac(f, g, .), or None."""
    J = jacobian3(f, g)
    lam = None
    for d, j in zip(D.images, J.images):
        if not j:
            if d:
                return None
            continue
        c = d.leading_coeff() / j.leading_coeff() if d else None
        if c is None or d != j * c:
            return None
        if lam is not None and c != lam:
            return None
        lam = c
    return lam


def local_slice_construction(D: Derivation, f: Polynomial, g: Polynomial, r: Polynomial,
                             deg_cap: int = 6, coeff_deg_cap: int | None = None, cap: int | None = None):
    if apply(D, f):
        raise ConditionFailed("kernel-f", f"D(f) = {apply(D, f)} is not 0", str(apply(D, f)))
    if apply(D, g):
        raise ConditionFailed("kernel-g", f"D(g) = {apply(D, g)} is not 0", str(apply(D, g)))
    Dr = apply(D, r)
    if not Dr:
        raise ConditionFailed("local-slice", "D(r) = 0, so there is no P with D(r) = g*P(f) != 0", "0")
    try:
        quot = exact_div(Dr, g)
    except NotDivisible:
        raise ConditionFailed("local-slice", f"g does not divide D(r) = {Dr}", str(Dr)) from None
    P = express_in_powers(quot, f)
    if P is None:
        raise ConditionFailed("local-slice", f"D(r)/g = {quot} is not a polynomial in f", str(quot))
    if not normal_form_mod_principal(r, g):
        raise ConditionFailed("r-not-in-gB", "r lies in gB", str(r))
    lam = jacobian_scalar(D, f, g)
    if lam is None:
        raise ConditionFailed("jacobian", "D is not a scalar multiple of Jac(f, g, .)")
    phi, rec = minimal_phi_search(f, g, r, deg_cap, coeff_deg_cap)
    h = exact_div(eval_fr(phi, f, r), g)
    Delta = jacobian3(f, h)
    Pf = P.compose([f], f.ring)
    if apply(Delta, r) != -(h * Pf) * (1 / lam):
        raise ConditionFailed("slice-image", "Delta(r) differs from -h*P(f)/lambda")
    cert = certify_lnd(Delta, cap)
    return SliceConstruction(h, Delta, phi, P, lam, rec, cert)


# families


def _as_poly(v, ring):
    if isinstance(v, Polynomial):
        return v
    return ring(str(v))


@dataclass
class FamilyParamsE:
    m: int
    n: int
    F: Polynomial

    def __post_init__(self):
        self.F = _as_poly(self.F, PARAM_RING)
        if self.F.ring != PARAM_RING:
            raise InputError("F must be a polynomial in t1, t2")
        if int(self.m) < 2 or int(self.n) < 1:
            raise InputError("need m >= 2 and n >= 1")
        self.m, self.n = int(self.m), int(self.n)
        if self.F.subs({"t2": 0}).is_constant():
            raise ConditionFailed("F(t1,0)", f"F(t1, 0) = {self.F.subs({'t2': 0})} is constant")

    def to_dict(self):
        return {"m": self.m, "n": self.n, "F": str(self.F)}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["m"], d["n"], d["F"])
        except KeyError as exc:
            raise InputError(f"missing family parameter {exc}") from None


@dataclass
class FamilyE:
    params: FamilyParamsE
    f: Polynomial
    g: Polynomial
    r: Polynomial
    h: Polynomial
    E: Derivation
    D: Derivation
    certificate: object = None


def family_base_derivation(m: int, ring: Ring = B) -> Derivation:
    """x d/dy + m y^(m-1) d/dz, which kills x and xz - y^m."""
    return Derivation.from_map(ring, {"y": ring.var("x"), "z": ring.var("y") ** (m - 1) * m})


def family_E(params: FamilyParamsE, cap: int | None = None, check: bool = True) -> FamilyE:
    m, n = params.m, params.n
    x, y, z = B.gens()
    f = x * z - y ** m
    g = x
    Fxf = params.F.compose([x, f], B)
    r = x * Fxf + y * f ** n
    h = exact_div(f ** (m * n + 1) + r ** m, x)
    E = jacobian3(f, h)
    out = FamilyE(params, f, g, r, h, E, family_base_derivation(m))
    if check:
        if apply(E, f) or apply(E, h):
            raise ConditionFailed("kernel", "E does not kill f and h")
        if apply(E, r) != -(h * f ** n):
            raise ConditionFailed("slice-image", "E(r) differs from -h*f^n")
        if not is_irreducible(E):
            raise ConditionFailed("irreducible", "E is reducible", str(is_irreducible(E).witness))
        out.certificate = certify_lnd(E, cap)
    return out


def proportionality_scalar(D: Derivation, E: Derivation):
    """s with D = s*E, or None."""
    s = None
    for d, e in zip(D.images, E.images):
        if not e and not d:
            continue
        if not e or not d:
            return None
        c = d.leading_coeff() / e.leading_coeff()
        if d != e * c or (s is not None and s != c):
            return None
        s = c
    return s


@dataclass
class FamilyParamsEx1:
    r1: Polynomial
    r2: Polynomial
    h1: Polynomial
    h2: Polynomial

    def __post_init__(self):
        self.r1, self.r2 = _as_poly(self.r1, B), _as_poly(self.r2, B)
        self.h1, self.h2 = _as_poly(self.h1, H_RING), _as_poly(self.h2, H_RING)
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            if r.ring != B or not r or r.variables() - {"x"}:
                raise InputError(f"{name} must be a nonzero polynomial in x")
        g = gcd_poly(self.r1, self.r2)
        if g.is_constant():
            raise ConditionFailed("gcd", f"gcd(r1, r2) = {g} is constant", str(g))
        for name, hh in (("h1", self.h1), ("h2", self.h2)):
            if hh.ring != H_RING:
                raise InputError(f"{name} must be a polynomial in x, t")
            u = hh.univariate("t")
            if not u:
                raise ConditionFailed("shape", f"{name} is zero")
            top = max(u)
            if top < 2 or not u[top].is_constant():
                raise ConditionFailed("shape", f"{name} needs a constant leading coefficient in degree >= 2")
            if 0 in u or 1 in u:
                raise ConditionFailed("shape", f"{name} has a t^0 or t^1 term")

    def to_dict(self):
        return {"r1": str(self.r1), "r2": str(self.r2), "h1": str(self.h1), "h2": str(self.h2)}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["r1"], d["r2"], d["h1"], d["h2"])
        except KeyError as exc:
            raise InputError(f"missing family parameter {exc}") from None


@dataclass
class FamilyEx1:
    params: FamilyParamsEx1
    D: Derivation
    chain: MCChain
    f: Polynomial
    g: Polynomial
    alpha: PlaneAutomorphism
    word: DecompositionWord
    certificate: object = None


def _h_at(hh: Polynomial, arg: Polynomial) -> Polynomial:
    return hh.compose([B.var("x"), arg], B)


def ex1_automorphism(params: FamilyParamsEx1) -> PlaneAutomorphism:
    """theta after beta_2 after theta after beta_1, over Q(x)."""
    from .plane_autos import to_plane

    K = plane_ring("Q(x)")
    x, y, z = B.gens()
    sw = PlaneAutomorphism.swap(K)

    def beta(r, hh):
        return PlaneAutomorphism(K, K.var("y"), to_plane(r * z - _h_at(hh, y), "Q(x)"))

    b1, b2 = beta(params.r1, params.h1), beta(params.r2, params.h2)
    return compose(sw, compose(b2, compose(sw, b1)))


def family_ex1(params: FamilyParamsEx1, cap: int | None = None) -> FamilyEx1:
    x, y, z = B.gens()
    r1, r2, h1, h2 = params.r1, params.r2, params.h1, params.h2
    sigma = r1 * z - _h_at(h1, y)
    dh1, dh2 = h1.diff("t"), h2.diff("t")
    D = Derivation.from_map(B, {
        "y": _h_at(dh2, sigma) * r1,
        "z": r2 + _h_at(dh2, sigma) * _h_at(dh1, y),
    })
    f = r2 * y - _h_at(h2, sigma)
    g = sigma
    if apply(D, f):
        raise ConditionFailed("kernel", f"D(f) = {apply(D, f)} is not 0")
    # g is a local slice: D(g) = r1*D(z) - h1'(y)*D(y) collapses to r1*r2
    if apply(D, g) != r1 * r2:
        raise ConditionFailed("slice", f"D(g) = {apply(D, g)} differs from r1*r2")
    alpha = ex1_automorphism(params)
    word = decompose_tame(alpha)
    chain = mc_chain_from_word(word, B)
    if not equivalent_check(chain.last, D):
        raise ConditionFailed("chain-end", "the chain does not end at D")
    cert = certify_lnd(D, cap)
    return FamilyEx1(params, D, chain, f, g, alpha, word, cert)


@register("mcchain")
def _replay_mcchain(subject, data):
    word = DecompositionWord.from_dict(subject["word"])
    chain = mc_chain_from_word(word, B, validate=False)
    cert = chain.to_certificate()
    return cert
