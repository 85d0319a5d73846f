import pytest

from lnd.certificates import Certificate, verify_certificate
from lnd.constructions import FamilyParamsE, family_E
from lnd.derivations import Derivation, apply
from lnd.errors import ConditionFailed, InputError
from lnd.fixtures import DELTA, EX1_ALPHA_Y, EX1_ALPHA_Z, TRIANGULAR, U, V
from lnd.poly import B
from lnd.rank_lab import (
    STEP_RING,
    default_candidates,
    detect_family,
    family_iv_steps,
    family_rank3,
    localized_membership_check,
    lscor_certify,
    non_triangularizable_check,
    rank3_certify,
)

x, y, z = B.gens()
dz = Derivation.partial(B, "z")
R21 = x ** 3 + y * U


def failed_names(cert):
    return [c.name for c in cert.failed()]


# non-triangularizability


def test_nontriang_example():
    cert = non_triangularizable_check(EX1_ALPHA_Y, EX1_ALPHA_Z, (1, 0))
    assert cert.ok
    w = {c.name: c.witness for c in cert.checks}
    assert w["gcd-linear-contents"] == "x"
    assert w["fbar-primitive"]["fbar"] == "-y^4"
    assert w["deg-fbar>deg-gbar"]["degrees"] == [4, 2]
    agrees, _ = verify_certificate(Certificate.from_json(cert.to_json()))
    assert agrees


@pytest.mark.parametrize("f, g, first", [
    (y, z, "gcd-linear-contents"),
    (EX1_ALPHA_Y, EX1_ALPHA_Z + 1, "g(x,0,0)=0"),
    (EX1_ALPHA_Y, x * EX1_ALPHA_Z, "g-primitive"),
    (EX1_ALPHA_Y + y ** 5 * x, EX1_ALPHA_Z, "fbar-primitive"),
    (x * y - y ** 2, x * z - y ** 3, "deg-fbar>deg-gbar"),
])
def test_nontriang_failures(f, g, first):
    with pytest.raises(ConditionFailed) as info:
        non_triangularizable_check(f, g)
    assert info.value.condition == first


def test_nontriang_perturbing_g_flips_one_condition():
    with pytest.raises(ConditionFailed) as info:
        non_triangularizable_check(EX1_ALPHA_Y, EX1_ALPHA_Z + 1)
    cert = info.value.certificate
    assert failed_names(cert) == ["g(x,0,0)=0"]


def test_nontriang_weights():
    with pytest.raises(InputError):
        non_triangularizable_check(EX1_ALPHA_Y, EX1_ALPHA_Z, (0, 0))


# localization membership


def test_membership_family_identities():
    m, n = 2, 1
    fam = family_E(FamilyParamsE(m, n, "t1^2"), check=False)
    binds = {"f": fam.f, "h": fam.h, "r": fam.r}
    for step in family_iv_steps(m, n, fam.params.F):
        ok, diff = localized_membership_check(step["target"], step["numerator"], step["divisor"], 1, binds)
        assert ok and not diff


def test_membership_reports_difference():
    f, h, r, *_ = STEP_RING.gens()
    ok, diff = localized_membership_check("x", f + r, h, 1, {"f": U, "h": V, "r": R21})
    assert not ok
    assert diff == x * V - U - R21
    with pytest.raises(InputError):
        localized_membership_check("x", f, h, -1, {"f": U, "h": V, "r": R21})


# rank 3


def test_rank3_homogeneous_example():
    v = apply(DELTA, R21)
    assert v == -V * U
    assert default_candidates(v, U, V) == [(U, 1), (V, 1)]
    cert = rank3_certify(DELTA, U, V, R21, v, [(U, 1), (V, 1)], iv_steps=family_iv_steps(2, 1, _t1sq()))
    assert cert.ok
    assert cert.data["V"] == "-f*h"
    names = [c.name for c in cert.checks]
    for prefix in ("i:", "ii:", "iii:", "iv:"):
        assert any(n.startswith(prefix) for n in names)
    agrees, fresh = verify_certificate(Certificate.from_json(cert.to_json()))
    assert agrees and fresh.ok


def _t1sq():
    from lnd.constructions import PARAM_RING

    return PARAM_RING("t1^2")


def test_rank3_rejects_partial():
    with pytest.raises(ConditionFailed) as info:
        rank3_certify(dz, x, y, z, B.one)
    assert info.value.condition.startswith("ii")


def test_rank3_without_localization_steps_fails_iv():
    cert = rank3_certify(DELTA, U, V, R21, -V * U, raise_on_fail=False)
    assert failed_names(cert) == ["iv:expressions"]


def test_rank3_detects_a_wrong_value():
    cert = rank3_certify(DELTA, U, V, R21, V * U, raise_on_fail=False)
    assert "i:E(r)=v" in failed_names(cert)


@pytest.mark.parametrize("fx", TRIANGULAR, ids=lambda t: t.name)
def test_rank3_rejects_triangular(fx):
    cert = rank3_certify(fx.derivation, x, fx.kernel_element, fx.local_slice, fx.slice_value,
                         raise_on_fail=False)
    bad = failed_names(cert)
    assert any(n.startswith(("ii", "iii")) for n in bad)


def test_rank3_family_point():
    fam, cert = family_rank3(FamilyParamsE(3, 1, "t1"))
    assert cert.ok
    assert apply(fam.E, fam.r) == -fam.h * fam.f


# local-slice shortcut


def test_lscor_homogeneous_example():
    cert = lscor_certify(Derivation.from_map(B, {"y": "x", "z": "2*y"}), U, x, R21)
    assert cert.ok
    assert cert.data["slice_construction"]["phi"] == "f^3 + r^2"


def test_lscor_family_2_2():
    fam = family_E(FamilyParamsE(2, 2, "t1^2"), check=False)
    assert apply(fam.E, fam.r) == -fam.h * fam.f ** 2
    base = Derivation.from_map(B, {"y": "x", "z": "2*y"})
    cert = lscor_certify(base, fam.f, x, fam.r)
    assert cert.ok
    _, direct = family_rank3(FamilyParamsE(2, 2, "t1^2"))
    # both routes agree on v up to sign
    assert cert.subject["v"] in (direct.subject["v"], str(-B(direct.subject["v"])))


def test_lscor_rejects_reducible():
    base = Derivation.from_map(B, {"y": "x", "z": "2*y"})
    with pytest.raises(ConditionFailed):
        lscor_certify(base, U, x ** 2, x ** 2 * R21)


def test_lscor_needs_steps_outside_family():
    base = Derivation.from_map(B, {"y": "x", "z": "2*y"})
    r = R21 + U ** 2
    with pytest.raises(InputError):
        lscor_certify(base, U, x, r)


@pytest.mark.parametrize("m, n, F", [(2, 1, "t1^2"), (3, 2, "t1 + t2"), (2, 2, "t1")])
def test_detect_family(m, n, F):
    fam = family_E(FamilyParamsE(m, n, F), check=False)
    got = detect_family(fam.f, x, fam.r)
    assert got is not None
    assert got[:2] == (m, n) and got[2] == fam.params.F
    assert detect_family(fam.f, y, fam.r) is None
