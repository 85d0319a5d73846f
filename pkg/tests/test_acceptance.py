"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with its runtime, then re-raises any
failure so pytest reports it as well.
"""

import random
import time
from contextlib import contextmanager

import pytest
import sympy

from conftest import SX, SY, SZ, random_c_instance, random_reduced_word, to_sympy
from lnd.constructions import (
    FamilyParamsE,
    c_construction,
    family_E,
    family_ex1,
    proportionality_scalar,
)
from lnd.derivations import (
    apply,
    build_commuting_partner,
    certify_lnd,
    commutator,
    deg_D,
    equivalent_check,
    is_irreducible,
    verify_linear_relation,
)
from lnd.errors import CapExceeded, ConditionFailed
from lnd.fixtures import (
    DELTA, EX1_ALPHA_Y, EX1_ALPHA_Z, EX1_D, EX1_PARAMS, ROTATION, SEMISIMPLE, TRIANGULAR, U, V,
)
from lnd.derivations import Derivation
from lnd.plane_autos import PLANE_Q, PlaneAutomorphism, decompose_tame, level_from_word
from lnd.poly import B
from lnd.rank_lab import family_rank3, non_triangularizable_check, rank3_certify

x, y, z = B.gens()


@contextmanager
def criterion(number, title, limit, capsys):
    t0 = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        if elapsed > limit:
            detail = f" (over the {limit:g} s limit)"
            raise AssertionError(f"criterion {number} took {elapsed:.1f} s, limit {limit:g} s")
        status = "PASS"
    except BaseException as exc:
        detail = detail or f" ({type(exc).__name__}: {exc})"
        raise
    finally:
        elapsed = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\ncriterion {number:>2} {status}: {title} [{elapsed:.2f} s]{detail}")


def sympy_jacobian_images(f, g):
    sf, sg = to_sympy(f), to_sympy(g)
    rows = [[sympy.diff(e, v) for v in (SX, SY, SZ)] for e in (sf, sg)]
    # cofactor expansion along the third row
    minors = [
        rows[0][1] * rows[1][2] - rows[0][2] * rows[1][1],
        -(rows[0][0] * rows[1][2] - rows[0][2] * rows[1][0]),
        rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
    ]
    return [sympy.expand(m) for m in minors]


def test_criterion_01_homogeneous_rank3_derivation(capsys):
    with criterion(1, "Jac(u, v, .) is a certified irreducible LND killing u and v", 10, capsys):
        # independent route: the Jacobian minors computed by sympy
        for ours, theirs in zip(DELTA.images, sympy_jacobian_images(U, V)):
            assert sympy.expand(to_sympy(ours) - theirs) == 0
        cert = certify_lnd(DELTA, 64)
        assert cert.replay()
        assert not apply(DELTA, U) and not apply(DELTA, V)
        assert is_irreducible(DELTA)


def test_criterion_02_family_identity(capsys):
    with criterion(2, "E(2,1,t1^2) equals s*Delta with |s| = 1", 10, capsys):
        scalars = []
        for _ in range(2):
            fam = family_E(FamilyParamsE(2, 1, "t1^2"))
            scalars.append(proportionality_scalar(fam.E, DELTA))
        assert scalars[0] is not None and scalars[0] == scalars[1]
        assert abs(scalars[0]) == 1
        assert fam.E == DELTA.scale(scalars[0])


GRID = [(m, n, F) for m in (2, 3) for n in (1, 2) for F in ("t1", "t1^2", "t1 + t2")]


@pytest.mark.parametrize("m, n, F", GRID)
def test_criterion_03_rank3_grid(capsys, m, n, F):
    with criterion(3, f"rank-3 certificate for E({m},{n},{F})", 120, capsys):
        fam, cert = family_rank3(FamilyParamsE(m, n, F), raise_on_fail=False)
        assert cert.ok, [c.name for c in cert.failed()]
        names = [c.name for c in cert.checks]
        for prefix in ("i:", "ii:", "iii:", "iv:"):
            assert any(n.startswith(prefix) for n in names)
        # independent check of the slice value
        assert apply(fam.E, fam.r) == -fam.h * fam.f ** n
        assert cert.subject["p_deg_cap"] is None and cert.data["p_deg_cap"] == fam.r.degree()


def test_criterion_04_nontriangularizable_rank2(capsys):
    with criterion(4, "rank-2 example: derivation, obstruction, swap count 2, level 4", 30, capsys):
        fam = family_ex1(EX1_PARAMS)
        assert fam.D == EX1_D
        assert non_triangularizable_check(EX1_ALPHA_Y, EX1_ALPHA_Z, (1, 0)).ok
        w = decompose_tame(PlaneAutomorphism.of(EX1_ALPHA_Y, EX1_ALPHA_Z, "Q(x)"))
        assert w.swap_count == 2
        assert level_from_word(w) == 4


def test_criterion_05_decomposition_roundtrip(capsys):
    with criterion(5, "100 random reduced words round-trip with swap count preserved", 60, capsys):
        rng = random.Random(20240605)
        for _ in range(100):
            w = random_reduced_word(rng, PLANE_Q, max_swaps=3, max_deg=4, bound=9)
            a = w.recompose()
            out = decompose_tame(a, check=False)
            assert out.recompose() == a
            assert out.swap_count == w.swap_count
            assert out.is_reduced()


def test_criterion_06_c_construction_bound(capsys):
    with criterion(6, "25 C-constructions vanish at the exponent bound", 60, capsys):
        rng = random.Random(606)
        for _ in range(25):
            deltas, fs = random_c_instance(rng)
            D, _, per = c_construction(deltas, fs)
            for g in B.gens():
                q = g
                for _ in range(per[str(g)]["e"]):
                    q = apply(D, q)
                assert not q


def test_criterion_07_degree_function(capsys):
    with criterion(7, "deg_Delta is additive on products and subadditive on sums (50 pairs)", 60, capsys):
        rng = random.Random(707)
        base = [U, V, z, B.one]

        def sample():
            out = B.zero
            while not out:
                for _ in range(rng.randint(1, 3)):
                    term = B.const(rng.choice([-3, -2, -1, 1, 2, 3]))
                    for _ in range(rng.randint(0, 2)):
                        term = term * rng.choice(base)
                    out = out + term
            return out

        for _ in range(50):
            p, q = sample(), sample()
            assert deg_D(DELTA, p * q) == deg_D(DELTA, p) + deg_D(DELTA, q)
            if p + q:
                assert deg_D(DELTA, p + q) <= max(deg_D(DELTA, p), deg_D(DELTA, q))


def test_criterion_08_commuting_partners(capsys):
    with criterion(8, "partners of 10 triangular LNDs commute, are LNDs, and differ in kernel", 30, capsys):
        assert len(TRIANGULAR) == 10
        for fx in TRIANGULAR:
            D = fx.derivation
            assert apply(D, fx.local_slice) == fx.slice_value
            E = build_commuting_partner(D, "x", fx.local_slice)
            assert commutator(D, E).is_zero
            assert certify_lnd(E)
            assert not equivalent_check(D, E)


def test_criterion_09_negative_controls(capsys):
    with criterion(9, "rank-3 and obstruction checks reject rank <= 2 data; caps fire", 30, capsys):
        dz = Derivation.partial(B, "z")
        cert = rank3_certify(dz, x, y, z, B.one, raise_on_fail=False)
        assert any(c.name.startswith(("ii", "iii")) for c in cert.failed())
        for fx in TRIANGULAR:
            cert = rank3_certify(fx.derivation, x, fx.kernel_element, fx.local_slice, fx.slice_value,
                                 raise_on_fail=False)
            assert any(c.name.startswith(("ii", "iii")) for c in cert.failed()), fx.name
        with pytest.raises(ConditionFailed):
            non_triangularizable_check(y, z)
        for D in (SEMISIMPLE, ROTATION):
            with pytest.raises(CapExceeded):
                certify_lnd(D, 64)


def test_criterion_10_chain_relations(capsys):
    with criterion(10, "chain relations h_i d_i = sigma d_(i-1) + f_i d_(i-2) for i = 3, 4", 30, capsys):
        chain = family_ex1(EX1_PARAMS).chain
        ds = chain.derivations
        for i in (3, 4):
            h, sigma, f = chain.witnesses[i]
            assert verify_linear_relation(h, ds[i - 1], sigma, ds[i - 2], f, ds[i - 3])
