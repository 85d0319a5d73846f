import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_c_instance
from lnd.certificates import verify_certificate
from lnd.constructions import (
    PHI_RING,
    FamilyParamsE,
    FamilyParamsEx1,
    c_construction,
    eval_fr,
    express_in_powers,
    family_base_derivation,
    family_E,
    family_ex1,
    jacobian_scalar,
    local_slice_construction,
    mc_chain_from_word,
    minimal_phi_search,
    proportionality_scalar,
)
from lnd.derivations import Derivation, apply, commutator, deg_D, is_irreducible, jacobian3
from lnd.errors import ConditionFailed, InputError, NotFoundWithinBounds
from lnd.fixtures import DELTA, EX1_D, EX1_PARAMS
from lnd.plane_autos import PLANE_Q, PlaneAutomorphism, decompose_tame
from lnd.poly import B, exact_div

x, y, z = B.gens()
dy, dz = Derivation.partial(B, "y"), Derivation.partial(B, "z")
U = x * z - y ** 2
R21 = x ** 3 + y * U  # the family slice for m = 2, n = 1, F = t1^2


# C-construction


def test_c_construction_example():
    D, bound, per = c_construction([dy, dz], [x, 2 * y])
    assert D == family_base_derivation(2)
    assert per["z"]["l"] == [3, 2] and per["z"]["e"] == 4
    assert bound == 4
    q = z
    for _ in range(per["z"]["e"]):
        q = apply(D, q)
    assert not q


def test_c_construction_rejects_bad_coefficients():
    with pytest.raises(ConditionFailed):
        c_construction([dy, dz], [y, x])
    with pytest.raises(ConditionFailed):
        c_construction([dy, Derivation.from_map(B, {"x": "y"})], [1, 1])
    with pytest.raises(InputError):
        c_construction([dy], [1, 2])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_c_construction_bound_kills_generators(seed):
    deltas, fs = random_c_instance(random.Random(seed))
    D, bound, per = c_construction(deltas, fs)
    assert commutator(D, deltas[-1]).is_zero
    for g in B.gens():
        e = per[str(g)]["e"]
        q = g
        for _ in range(e):
            q = apply(D, q)
        assert not q
        assert e >= deg_D(D, g) + 1


# chains


def test_chain_of_the_example():
    chain = EX1_chain()
    assert chain.derivations[0] == dy and chain.derivations[1] == dz
    assert chain.derivations[2] == Derivation.from_map(B, {"y": "x", "z": "2*y"})
    assert chain.last == EX1_D
    h3, s3, f3 = chain.witnesses[3]
    assert (h3, s3, f3) == (B.one, 2 * y, x)
    h4, s4, f4 = chain.witnesses[4]
    assert (h4, s4, f4) == (B.one, 2 * U, x)
    assert chain.validate()


def EX1_chain():
    return family_ex1(EX1_PARAMS).chain


def test_chain_edge_classes():
    ident = decompose_tame(PlaneAutomorphism.identity(PLANE_Q))
    assert [d for d in mc_chain_from_word(ident).derivations] == [dy, dz]
    sw = decompose_tame(PlaneAutomorphism.swap(PLANE_Q))
    assert mc_chain_from_word(sw).derivations == [dy]


def test_chain_certificate_replays():
    cert = EX1_chain().to_certificate()
    assert cert.ok
    agrees, fresh = verify_certificate(cert)
    assert agrees and fresh.ok


@pytest.mark.parametrize("r1, r2, h1, h2", [
    ("x", "x", "t^2", "t^2"),
    ("x", "x^2", "t^2", "t^3"),
    ("x^2", "x", "t^3 + x*t^2", "2*t^2"),
])
def test_family_ex1_chains(r1, r2, h1, h2):
    fam = family_ex1(FamilyParamsEx1(r1, r2, h1, h2))
    assert fam.chain.validate()
    assert not apply(fam.D, fam.f)
    # g is a local slice whose value is r1*r2
    assert apply(fam.D, fam.g) == B(r1) * B(r2)
    ds = fam.chain.derivations
    for a, b in zip(ds, ds[1:]):
        assert commutator(a, b).is_zero
    assert all(is_irreducible(d) for d in ds)


def test_family_ex1_example_derivation():
    assert family_ex1(EX1_PARAMS).D == EX1_D


@pytest.mark.parametrize("r1, r2, h1, h2", [
    ("x", "x + 1", "t^2", "t^2"),
    ("x", "x", "t", "t^2"),
    ("x", "x", "t^2 + 1", "t^2"),
    ("x", "x", "x*t^2", "t^2"),
])
def test_family_ex1_rejects(r1, r2, h1, h2):
    with pytest.raises(ConditionFailed):
        FamilyParamsEx1(r1, r2, h1, h2)


# phi search and local slices


def test_phi_search_example():
    phi, rec = minimal_phi_search(U, x, R21)
    f, r = PHI_RING.gens()
    assert phi == f ** 3 + r ** 2
    assert rec["degree"] == 2 and rec["infeasible"] == [1]
    assert exact_div(eval_fr(phi, U, R21), x) == B("z*(x*z-y^2)^2 + 2*x^2*y*(x*z-y^2) + x^5")


def test_phi_search_trivial_and_caps():
    phi, _ = minimal_phi_search(U, B.one, R21)
    assert phi == PHI_RING.var("r")
    with pytest.raises(NotFoundWithinBounds):
        minimal_phi_search(U, x, R21, deg_cap=1)
    with pytest.raises(InputError):
        minimal_phi_search(U, B.zero, R21)


@pytest.mark.parametrize("m, n, F", [(2, 1, "t1"), (2, 2, "t1^2"), (3, 1, "t1 + t2")])
def test_phi_search_is_minimal_for_the_family(m, n, F):
    fam = family_E(FamilyParamsE(m, n, F), check=False)
    phi, rec = minimal_phi_search(fam.f, x, fam.r)
    assert rec["degree"] == m
    assert rec["infeasible"] == list(range(1, m))
    assert eval_fr(phi, fam.f, fam.r) == x * fam.h


def test_local_slice_construction_example():
    sc = local_slice_construction(family_base_derivation(2), U, x, R21)
    assert sc.delta == DELTA
    assert sc.h == B("z*(x*z-y^2)^2 + 2*x^2*y*(x*z-y^2) + x^5")
    assert sc.scalar == 1
    assert apply(sc.delta, R21) == -sc.h * U


def test_local_slice_construction_errors():
    D = family_base_derivation(2)
    with pytest.raises(ConditionFailed) as info:
        local_slice_construction(D, U, x, U)
    assert info.value.condition == "local-slice"
    with pytest.raises(ConditionFailed) as info:
        local_slice_construction(D, y, x, R21)
    assert info.value.condition == "kernel-f"


def test_express_in_powers():
    P = express_in_powers(U ** 3 - 2 * U + 5, U)
    assert str(P) == "f^3 - 2*f + 5"
    assert express_in_powers(y, U) is None


def test_jacobian_scalar():
    assert jacobian_scalar(DELTA.scale(3), U, B("z*(x*z-y^2)^2 + 2*x^2*y*(x*z-y^2) + x^5")) == 3
    assert jacobian_scalar(dy, x, y) is None


# families


def test_family_identity_with_delta():
    fam = family_E(FamilyParamsE(2, 1, "t1^2"))
    s = proportionality_scalar(DELTA, fam.E)
    assert s == 1
    assert fam.E == DELTA


@pytest.mark.parametrize("m, n, F", [
    (2, 1, "t1"), (2, 1, "t1 + t2"), (2, 2, "t1^2"), (3, 1, "t1"), (3, 2, "t1^2 + t2"),
])
def test_family_kernel_and_slice(m, n, F):
    fam = family_E(FamilyParamsE(m, n, F))
    assert not apply(fam.E, fam.f) and not apply(fam.E, fam.h)
    assert apply(fam.E, fam.r) == -fam.h * fam.f ** n
    assert x * fam.h == fam.f ** (m * n + 1) + fam.r ** m
    assert fam.E == jacobian3(fam.f, fam.h)


@pytest.mark.parametrize("m, n, F, error", [
    (2, 1, "t2", ConditionFailed),
    (1, 1, "t1", InputError),
    (2, 0, "t1", InputError),
    (2, 1, "t1 + y", InputError),
])
def test_family_parameter_errors(m, n, F, error):
    with pytest.raises(error):
        FamilyParamsE(m, n, F)
