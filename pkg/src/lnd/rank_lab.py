"""Certificate checkers: non-triangularizability, the four-condition rank-3
criterion, its local-slice shortcut, and localization membership."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .certificates import Certificate, Check, register
from .constructions import (
    FamilyParamsE,
    PARAM_RING,
    local_slice_construction,
)
from .derivations import Derivation, apply, certify_lnd, is_irreducible
from .errors import CapExceeded, ConditionFailed, InputError, NotDivisible
from .linalg import SpanSolver, poly_span_solver
from .poly import (
    B,
    Polynomial,
    Ring,
    content_in_x,
    exact_div,
    gcd_poly,
    linear_part,
    normal_form_mod_principal,
    weighted_leading_form,
)

KER_RING = Ring(("f", "h"))          # abstract kernel generators
SLICE_RING = Ring(("f", "h", "r"))   # abstract f, h, r
STEP_RING = Ring(("f", "h", "r", "x", "y", "z"))


def _raise_first(cert: Certificate):
    bad = cert.failed()
    if bad:
        err = ConditionFailed(bad[0].name, "condition does not hold", bad[0].witness)
        err.certificate = cert
        raise err
    return cert


# non-triangularizability


def _nontriang_checks(f: Polynomial, g: Polynomial, weights) -> Certificate:
    weights = tuple(int(w) for w in weights)
    Lf, Lg = linear_part(f), linear_part(g)
    checks = []
    if not Lf or not Lg:
        checks.append(Check("gcd-linear-contents", False, {"L(f)": str(Lf), "L(g)": str(Lg),
                                                             "reason": "a linear part is zero"}))
    else:
        d = gcd_poly(content_in_x(Lf), content_in_x(Lg))
        checks.append(Check("gcd-linear-contents", not d.is_constant(), str(d)))
    dg = content_in_x(g)
    checks.append(Check("g-primitive", bool(g) and dg.is_constant(), str(dg)))
    g0 = g.subs({"y": 0, "z": 0})
    checks.append(Check("g(x,0,0)=0", not g0, str(g0)))
    fbar, df = weighted_leading_form(f, weights)
    gbar, dgw = weighted_leading_form(g, weights)
    dfb = content_in_x(fbar)
    checks.append(Check("fbar-primitive", dfb.is_constant(), {"fbar": str(fbar), "d": str(dfb)}))
    checks.append(Check("deg-fbar>deg-gbar", df > dgw, {"fbar": str(fbar), "gbar": str(gbar),
                                                         "degrees": [df, dgw]}))
    subject = {"f": str(f), "g": str(g), "weights": list(weights)}
    return Certificate("nontriangularizable", subject, checks, {})


def non_triangularizable_check(f: Polynomial, g: Polynomial, weights=(1, 0)) -> Certificate:
    """All five obstruction hypotheses, or ConditionFailed for the first that fails."""
    if not any(weights):
        raise InputError("weights must not both be zero")
    return _raise_first(_nontriang_checks(f, g, weights))


@register("nontriangularizable")
def _replay_nontriang(subject, data):
    return _nontriang_checks(B(subject["f"]), B(subject["g"]), subject["weights"])


# localization membership


def localized_membership_check(target: str, numerator: Polynomial, divisor: Polynomial, power: int,
                               bindings: dict):
    """Does target * divisor^power equal numerator after substituting bindings?

    ``numerator`` and ``divisor`` live in a ring over f, h, r (and possibly
    x, y, z themselves); ``bindings`` gives f, h, r as elements of B.
    Returns (ok, difference).
    """
    if power < 0:
        raise InputError("power must be nonnegative")
    images = []
    for n in numerator.ring.names:
        if n in bindings:
            images.append(bindings[n])
        elif B.has(n):
            images.append(B.var(n))
        else:
            raise InputError(f"no binding for {n}")
    num = numerator.compose(images, B)
    if divisor.ring != numerator.ring:
        raise InputError("numerator and divisor must share a ring")
    den = divisor.compose(images, B)
    diff = B.var(target) * den ** power - num
    return not diff, diff


# fractions over Q[f, h, r]


@dataclass(frozen=True)
class _Frac:
    num: Polynomial
    den: Polynomial

    @staticmethod
    def make(num, den):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return _Frac(num, den.ring.one)
        g = gcd_poly(num, den)
        if not g.is_constant():
            num, den = exact_div(num, g), exact_div(den, g)
        c = den.leading_coeff()
        return _Frac(num * (1 / c), den * (1 / c))

    def __add__(self, o):
        return _Frac.make(self.num * o.den + o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _Frac.make(self.num * o.num, self.den * o.den)

    def __pow__(self, e):
        return _Frac(self.num ** e, self.den ** e)

    def __truediv__(self, o):
        return _Frac.make(self.num * o.den, self.den * o.num)


def _eval_frac(p: Polynomial, values: dict) -> _Frac:
    ring = SLICE_RING
    one = ring.one
    total = _Frac(ring.zero, one)
    cache = {}
    for exps, c in p.terms():
        term = _Frac(ring.const(c), one)
        for name, e in zip(p.ring.names, exps):
            if e:
                key = (name, e)
                if key not in cache:
                    cache[key] = values[name] ** e
                term = term * cache[key]
        total = total + term
    return total


def _v_power(den: Polynomial, V: Polynomial, limit: int = 64):
    """Least K with den | V^K, or None."""
    if den.is_constant():
        return 0
    P = V
    for K in range(1, limit + 1):
        try:
            exact_div(P, den)
            return K
        except NotDivisible:
            P = P * V
    return None


def _iv_checks(steps, bindings: dict, V: Polynomial):
    """Verify localization steps in B, then compose them over Q[f, h, r]."""
    checks = []
    values = {n: _Frac(SLICE_RING.var(n), SLICE_RING.one) for n in ("f", "h", "r")}
    for st in steps:
        target = st["target"]
        num = STEP_RING(st["numerator"]) if isinstance(st["numerator"], str) else st["numerator"]
        div = STEP_RING(st.get("divisor", "1")) if isinstance(st.get("divisor", "1"), str) else st["divisor"]
        ok, diff = localized_membership_check(target, num, div, 1, bindings)
        nonzero = bool(div.compose([bindings["f"], bindings["h"], bindings["r"], *B.gens()], B))
        checks.append(Check(f"iv:relation:{target}", ok and nonzero,
                            {"numerator": str(num), "divisor": str(div), "difference": str(diff) if diff else "0"}))
        if not (ok and nonzero):
            return checks, None
        missing = (num.variables() | div.variables()) - set(values)
        if missing:
            checks.append(Check(f"iv:order:{target}", False, sorted(missing)))
            return checks, None
        values[target] = _eval_frac(num, values) / _eval_frac(div, values)
    exprs = {}
    Vs = V.compose([SLICE_RING.var("f"), SLICE_RING.var("h")], SLICE_RING)
    for var in ("x", "y", "z"):
        if var not in values:
            checks.append(Check(f"iv:{var}", False, "no expression supplied"))
            continue
        fr = values[var]
        K = _v_power(fr.den, Vs)
        if K is None:
            checks.append(Check(f"iv:{var}", False, {"denominator": str(fr.den)}))
            continue
        numer = fr.num * exact_div(Vs ** K, fr.den)
        exprs[var] = {"numerator": str(numer), "v_power": K}
        # clear denominators and compare in B
        v = V.compose([bindings["f"], bindings["h"]], B)
        lhs = B.var(var) * v ** K
        rhs = numer.compose([bindings["f"], bindings["h"], bindings["r"]], B)
        checks.append(Check(f"iv:{var}", lhs == rhs, exprs[var]))
    return checks, exprs


# rank 3


def _span_solve(target: Polynomial, gens: dict, ring_for_order):
    s = poly_span_solver(ring_for_order)
    for lab, p in gens.items():
        s.add(p._t, lab)
    return s.solve(target._t)


def _kernel_monomials(f, h, cap_deg, powers_cache=None):
    """{(i, j): f^i h^j} with i*deg f + j*deg h <= cap_deg."""
    df, dh = max(f.degree(), 1), max(h.degree(), 1)
    fp = [B.one]
    while (len(fp)) * df <= cap_deg:
        fp.append(fp[-1] * f)
    out = {}
    hp = B.one
    j = 0
    while j * dh <= cap_deg:
        for i in range(len(fp)):
            if i * df + j * dh <= cap_deg:
                out[(i, j)] = fp[i] * hp
        hp = hp * h
        j += 1
    return out


def _as_kernel_poly(sol: dict) -> Polynomial:
    out = KER_RING.zero
    F, H = KER_RING.gens()
    for (i, j), c in sol.items():
        out = out + F ** i * H ** j * c
    return out


def _univariate_checks(V: Polynomial):
    checks = []
    vars_ = V.variables()
    checks.append(Check("ii:not-in-k[f]", not (vars_ <= {"f"}), str(V)))
    checks.append(Check("ii:not-in-k[h]", not (vars_ <= {"h"}), str(V)))
    # linear-form candidates: the top form must be c*(a f + b h)^d
    cands = []
    if V and V.degree() > 0:
        top, d = weighted_leading_form(V, (1, 1), ("f", "h"))
        lin = _linear_root(top, d)
        if lin is not None:
            cands.append(lin)
    failing = []
    for ell in cands:
        pw = {k: ell ** k for k in range(V.degree() + 1)}
        if _span_solve(V, pw, KER_RING) is not None:
            failing.append(str(ell))
    checks.append(Check("ii:not-univariate-in-linear-forms", not failing,
                        {"candidates": [str(c) for c in cands], "univariate_in": failing}))
    return checks


def _linear_root(top: Polynomial, d: int):
    """ell linear with top = c*ell^d, or None."""
    if d == 0:
        return None
    F, H = KER_RING.gens()
    a = top.coeff((d, 0))
    b = top.coeff((d - 1, 1)) if d >= 1 else 0
    if a:
        ell = F + H * (b / (a * d))
        c = a
    else:
        b = top.coeff((0, d))
        if not b:
            return None
        ell = H
        c = b
    return ell if top == ell ** d * c else None


def _iii_checks(r, f, h, v, candidates, p_deg_cap):
    checks = []
    gens = _kernel_monomials(f, h, p_deg_cap)
    for combo in product(*[range(e + 1) for _, e in candidates]):
        if not any(combo):
            continue
        q = B.one
        label = []
        for (c, _), e in zip(candidates, combo):
            if e:
                q = q * c ** e
                label.append(f"({c})^{e}" if e > 1 else f"({c})")
        name = "iii:" + "*".join(label)
        if q.is_constant():
            continue
        try:
            exact_div(v, q)
        except NotDivisible:
            checks.append(Check(name, True, "does not divide v"))
            continue
        s = poly_span_solver(B)
        for lab, p in gens.items():
            s.add(normal_form_mod_principal(p, q)._t, lab)
        sol = s.solve(normal_form_mod_principal(r, q)._t)
        if sol is None:
            checks.append(Check(name, True, "infeasible"))
        else:
            checks.append(Check(name, False, {"p": str(_as_kernel_poly(sol))}))
    return checks


def _multiplicity(p: Polynomial, q: Polynomial) -> int:
    if q.is_constant():
        return 0
    k = 0
    while True:
        try:
            p = exact_div(p, q)
            k += 1
        except NotDivisible:
            return k


def default_candidates(v: Polynomial, f: Polynomial, h: Polynomial):
    """f and h with their multiplicities in v, plus any nonconstant cofactor."""
    cands = []
    rest = v
    for c in (f, h):
        k = _multiplicity(v, c)
        if k:
            cands.append((c, k))
            rest = exact_div(rest, c ** k)
    if not rest.is_constant():
        cands.append((rest, 1))
    return cands


def _rank3(E: Derivation, f, h, r, v, candidates, p_deg_cap, iv_steps, cap) -> Certificate:
    checks = []
    try:
        nil = certify_lnd(E, cap)
        checks.append(Check("lnd", True, {"indices": nil.indices, "cap": nil.cap}))
    except CapExceeded as exc:
        checks.append(Check("lnd", False, {"variable": exc.variable, "cap": exc.cap}))
    irr = is_irreducible(E)
    checks.append(Check("irreducible", irr.value, str(irr.witness)))
    Ef, Eh, Er = apply(E, f), apply(E, h), apply(E, r)
    checks.append(Check("i:E(f)=0", not Ef, str(Ef)))
    checks.append(Check("i:E(h)=0", not Eh, str(Eh)))
    checks.append(Check("i:E(r)=v", Er == v and bool(v), {"E(r)": str(Er)}))
    gens = _kernel_monomials(f, h, max(v.degree(), 0))
    sol = _span_solve(v, gens, B) if v else None
    V = _as_kernel_poly(sol) if sol is not None else None
    checks.append(Check("i:v-in-k[f,h]", V is not None, str(V) if V is not None else None))
    if V is None:
        return Certificate("rank3", {}, checks, {})
    checks.extend(_univariate_checks(V))
    if candidates is None:
        candidates = default_candidates(v, f, h)
    if p_deg_cap is None:
        p_deg_cap = r.degree()
    checks.extend(_iii_checks(r, f, h, v, candidates, p_deg_cap))
    exprs = None
    if iv_steps:
        iv, exprs = _iv_checks(iv_steps, {"f": f, "h": h, "r": r}, V)
        checks.extend(iv)
    else:
        checks.append(Check("iv:expressions", False, "no localization steps supplied"))
    data = {
        "V": str(V),
        "candidates": [[str(c), e] for c, e in candidates],
        "p_deg_cap": p_deg_cap,
        "p_deg_grading": "i*deg(f) + j*deg(h)",
        "iv_expressions": exprs,
        "scope": "non-univariate checked against f, h and linear-form candidates; "
                 "minimality checked over the listed divisor candidates",
    }
    return Certificate("rank3", {}, checks, data)


def _steps_to_json(steps):
    if not steps:
        return []
    return [{"target": s["target"], "numerator": str(s["numerator"]), "divisor": str(s.get("divisor", "1"))}
            for s in steps]


def rank3_certify(E: Derivation, f, h, r, v, divisor_candidates=None, p_deg_cap=None, iv_steps=None,
                  cap=None, raise_on_fail: bool = True) -> Certificate:
    """Check the four rank-3 conditions for E with witnesses f, h, r, v."""
    cert = _rank3(E, f, h, r, v, divisor_candidates, p_deg_cap, iv_steps, cap)
    cert.subject = {
        "derivation": E.to_dict(),
        "f": str(f), "h": str(h), "r": str(r), "v": str(v),
        "candidates": [[str(c), e] for c, e in divisor_candidates] if divisor_candidates else None,
        "p_deg_cap": p_deg_cap,
        "iv_steps": _steps_to_json(iv_steps),
    }
    return _raise_first(cert) if raise_on_fail else cert


@register("rank3")
def _replay_rank3(subject, data):
    E = Derivation.from_dict(subject["derivation"])
    cands = subject.get("candidates")
    if cands:
        cands = [(B(c), int(e)) for c, e in cands]
    return rank3_certify(E, B(subject["f"]), B(subject["h"]), B(subject["r"]), B(subject["v"]), cands,
                         subject.get("p_deg_cap"), subject.get("iv_steps"), raise_on_fail=False)


# the family and the local-slice shortcut


def family_iv_steps(m: int, n: int, F: Polynomial):
    """x*h = f^(mn+1) + r^m,  y*f^n = r - x*F(x, f),  z*x = f + y^m."""
    f, h, r, x, y, z = STEP_RING.gens()
    Fxf = F.compose([x, f], STEP_RING)
    return [
        {"target": "x", "numerator": f ** (m * n + 1) + r ** m, "divisor": h},
        {"target": "y", "numerator": r - x * Fxf, "divisor": f ** n},
        {"target": "z", "numerator": f + y ** m, "divisor": x},
    ]


def detect_family(f: Polynomial, g: Polynomial, r: Polynomial):
    """Recover (m, n, F) when (f, g, r) has the family shape, else None."""
    x, y, z = B.gens()
    if g != x:
        return None
    m = f.degree("y")
    if m < 2 or f != x * z - y ** m:
        return None
    for n in range(1, r.degree() + 1):
        try:
            G = exact_div(r - y * f ** n, x)
        except NotDivisible:
            continue
        # on y = 0, f = x*z, so x^a (xz)^b reads off the t1^a t2^b coefficient
        G0 = G.subs({"y": 0})
        terms = []
        ok = True
        for (ex, ey, ez), c in G0.terms():
            if ex < ez:
                ok = False
                break
            terms.append(((ex - ez, ez), c))
        if not ok:
            continue
        F = Polynomial.from_terms(PARAM_RING, terms)
        if F.compose([x, f], B) == G and not F.subs({"t2": 0}).is_constant():
            return m, n, F
    return None


def lscor_certify(D: Derivation, f, g, r, deg_cap: int = 6, coeff_deg_cap=None, iv_steps=None,
                  cap=None, raise_on_fail: bool = True) -> Certificate:
    """Local slice construction followed by the rank-3 check of the result."""
    sc = local_slice_construction(D, f, g, r, deg_cap, coeff_deg_cap, cap)
    E, h = sc.delta, sc.h
    irr = is_irreducible(E)
    if not irr:
        raise ConditionFailed("irreducible", "the constructed derivation is reducible", str(irr.witness))
    v = apply(E, r)
    dP = sc.P.degree()
    cands = [(f, dP), (h, 1)] if dP > 0 else [(h, 1)]
    if iv_steps is None:
        fam = detect_family(f, g, r)
        if fam is None:
            raise InputError("localization steps are required for data outside the family")
        iv_steps = family_iv_steps(*fam)
    cert = rank3_certify(E, f, h, r, v, cands, None, iv_steps, cap, raise_on_fail=False)
    cert.data["slice_construction"] = {"phi": str(sc.phi), "P": str(sc.P), "lambda": str(sc.scalar),
                                       "phi_search": sc.phi_record}
    return _raise_first(cert) if raise_on_fail else cert


def family_rank3(params: FamilyParamsE, cap=None, raise_on_fail: bool = True):
    """family_E followed by rank3_certify with default candidates and p-degree cap."""
    from .constructions import family_E

    # the rank-3 checks repeat nilpotency, irreducibility and kernel membership
    fam = family_E(params, cap, check=False)
    v = apply(fam.E, fam.r)
    steps = family_iv_steps(params.m, params.n, params.F)
    cert = rank3_certify(fam.E, fam.f, fam.h, fam.r, v, None, None, steps, cap, raise_on_fail=False)
    cert.data["family"] = params.to_dict()
    return fam, (_raise_first(cert) if raise_on_fail else cert)
