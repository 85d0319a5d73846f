import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from lnd.poly import B, Polynomial

SX, SY, SZ = sympy.symbols("x y z")


def to_sympy(p):
    """Independent reading of a polynomial through its printed form."""
    return sympy.sympify(str(p).replace("^", "**"))


def same(p, expr) -> bool:
    return sympy.simplify(to_sympy(p) - expr) == 0


coeffs = st.builds(mpq, st.integers(-6, 6), st.integers(1, 4))
nonzero_coeffs = coeffs.filter(bool)


@st.composite
def polys(draw, ring=B, max_terms=5, max_deg=3, nonzero=False):
    n = len(ring.names)
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = []
    for _ in range(k):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms.append((exps, draw(nonzero_coeffs)))
    p = Polynomial.from_terms(ring, terms)
    if nonzero and not p:
        p = ring.one
    return p


@st.composite
def integer_polys(draw, ring=B, max_terms=4, max_deg=3):
    n = len(ring.names)
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms.append((exps, draw(st.integers(-5, 5))))
    return Polynomial.from_terms(ring, terms)


def random_rational(rng, bound=9, nonzero=False):
    while True:
        q = mpq(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def random_triangle(rng, ring, min_deg=0, max_deg=4, bound=9):
    from lnd.plane_autos import Triangular

    d = rng.randint(min_deg, max_deg)
    yv = ring.var("y")
    F = ring.zero
    for k in range(d + 1):
        c = random_rational(rng, bound, nonzero=(k == d and d >= 2))
        F = F + yv ** k * c
    return Triangular(ring, random_rational(rng, bound, True), random_rational(rng, bound, True), F,
                      random_rational(rng, bound))


def random_reduced_word(rng, ring, max_swaps=3, max_deg=4, bound=9):
    """[tau_0, swap, tau_1, ..., swap, tau_m] with every interior triangle of degree >= 2."""
    from lnd.plane_autos import SWAP, DecompositionWord

    m = rng.randint(0, max_swaps)
    factors = [random_triangle(rng, ring, 0, max_deg, bound)]
    for i in range(m):
        factors.append(SWAP)
        inner = i < m - 1
        factors.append(random_triangle(rng, ring, 2 if inner else 0, max_deg, bound))
    return DecompositionWord(ring, tuple(factors))


def random_poly_in(rng, ring, names, max_deg=3, max_terms=4, bound=5):
    """Random polynomial of total degree <= max_deg in the given variables only."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * ring.nvars
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            if names:
                exps[ring.index(rng.choice(names))] += 1
        terms.append((tuple(exps), rng.randint(-bound, bound)))
    p = Polynomial.from_terms(ring, terms)
    return p if p else ring.one


def random_c_instance(rng, ring=B):
    """Commuting coordinate partials with coefficients killed by every later partial."""
    from lnd.derivations import Derivation

    m = rng.randint(2, 3)
    order = rng.sample(list(ring.names), m)
    deltas = [Derivation.partial(ring, n) for n in order]
    fs = []
    for k in range(m):
        allowed = [n for n in ring.names if n not in order[k:]]
        fs.append(random_poly_in(rng, ring, allowed))
    return deltas, fs
