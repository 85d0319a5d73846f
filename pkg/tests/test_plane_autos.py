import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_reduced_word, random_triangle
from lnd.derivations import Derivation
from lnd.errors import InputError, NotAnAutomorphism
from lnd.fixtures import BETA, EX1_ALPHA_Y, EX1_ALPHA_Z, PHI_CANDIDATE, PHI_SWAP_UPPER_BOUND, THETA
from lnd.plane_autos import (
    PLANE_Q,
    PLANE_QX,
    SWAP,
    DecompositionWord,
    PlaneAutomorphism,
    Triangular,
    compose,
    decompose_tame,
    invert,
    invert_map,
    is_B_automorphism,
    level,
    level_from_word,
    psi_representative,
)
from lnd.poly import B

x, y, z = B.gens()
ALPHA = PlaneAutomorphism.of(EX1_ALPHA_Y, EX1_ALPHA_Z, "Q(x)")


def pa(P, Q, field="Q"):
    return PlaneAutomorphism.of(P, Q, field)


def test_composition_basics():
    sw = PlaneAutomorphism.swap(PLANE_Q)
    ident = PlaneAutomorphism.identity(PLANE_Q)
    assert compose(sw, sw) == ident
    a = pa("y + z^3", "z")
    assert compose(a, ident) == a == compose(ident, a)


def test_example_composite():
    # theta after beta after theta after beta
    alpha = compose(THETA, compose(BETA, compose(THETA, BETA)))
    assert alpha == ALPHA
    sigma = PLANE_QX("x*z - y^2")
    assert alpha.Q == sigma
    assert alpha.P == PLANE_QX("x*y") - sigma ** 2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b, c = (random_triangle(rng, PLANE_Q, 0, 3, 5).as_map() for _ in range(3))
    sw = PlaneAutomorphism.swap(PLANE_Q)
    b = compose(sw, b)
    assert compose(a, compose(b, c)) == compose(compose(a, b), c)


@pytest.mark.parametrize("P, Q, swaps", [
    ("y", "z + y^3", 0),
    ("z", "y", 1),
    ("y", "z", 0),
    ("2*z + 1", "3*y - z", 1),
])
def test_decompose_examples(P, Q, swaps):
    a = pa(P, Q)
    w = decompose_tame(a)
    assert w.swap_count == swaps
    assert w.is_reduced()
    assert w.recompose() == a


def test_decompose_swap_word_shape():
    w = decompose_tame(PlaneAutomorphism.swap(PLANE_Q))
    assert w.factors[1] == SWAP
    assert w.factors[0].is_identity() and w.factors[2].is_identity()


def test_decompose_example_alpha():
    w = decompose_tame(ALPHA)
    assert w.swap_count == 2
    assert level_from_word(w) == 4
    assert compose(invert(w), ALPHA).is_identity()
    assert compose(ALPHA, invert(w)).is_identity()


@pytest.mark.parametrize("P, Q", [
    ("y^2", "z"),
    ("y + z^2", "y + z^2 + 1"),
    ("y", "y^2 + 1"),
    ("y*z", "z"),
    ("y + z^2", "z + y^3"),
])
def test_decompose_rejects_non_automorphisms(P, Q):
    with pytest.raises(NotAnAutomorphism):
        decompose_tame(pa(P, Q))


def test_invert_examples():
    tau = pa("y", "x*z - y^2", "Q(x)")
    assert invert_map(tau) == pa("y", "z/x + y^2/x", "Q(x)")
    sw = PlaneAutomorphism.swap(PLANE_Q)
    assert invert_map(sw) == sw


@pytest.mark.parametrize("P, Q, expected", [
    ("y", "z", 2),
    ("z", "y", 1),
    ("z", "y + z^2", 1),
    ("z + y^2", "y", 3),
])
def test_level_examples(P, Q, expected):
    assert level(pa(P, Q)) == expected


def test_level_needs_reduced_word():
    t = Triangular.identity(PLANE_Q)
    with pytest.raises(InputError):
        level_from_word(DecompositionWord(PLANE_Q, (t, SWAP, t, SWAP, t)))


def test_level_of_example():
    assert level(ALPHA) == 4


def test_phi_candidate_upper_bound():
    w = decompose_tame(PHI_CANDIDATE)
    assert w.swap_count == PHI_SWAP_UPPER_BOUND
    assert level_from_word(w) == PHI_SWAP_UPPER_BOUND + 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_roundtrip_of_reduced_words(seed):
    rng = random.Random(seed)
    w = random_reduced_word(rng, PLANE_Q, max_swaps=2, max_deg=3, bound=5)
    a = w.recompose()
    out = decompose_tame(a)
    assert out.recompose() == a
    assert out.swap_count == w.swap_count
    assert out.is_reduced()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_invert_is_two_sided(seed):
    rng = random.Random(seed)
    w = random_reduced_word(rng, PLANE_Q, max_swaps=2, max_deg=3, bound=5)
    a = w.recompose()
    inv = invert(w)
    assert compose(inv, a).is_identity()
    assert compose(a, inv).is_identity()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_left_triangular_coset_invariance(seed):
    rng = random.Random(seed)
    w = random_reduced_word(rng, PLANE_Q, max_swaps=2, max_deg=3, bound=5)
    a = w.recompose()
    tau = random_triangle(rng, PLANE_Q, 0, 3, 5).as_map()
    left = decompose_tame(compose(tau, a))
    assert left.swap_count == w.swap_count
    assert level_from_word(left) == level_from_word(decompose_tame(a))


def test_psi_examples():
    assert psi_representative(y, z).is_identity()
    dz = Derivation.partial(B, "z").scale(x)
    a = psi_representative(y, z, x, dz)
    assert a == pa("y", "z/x", "Q(x)")
    assert level(a) == 2
    with pytest.raises(NotAnAutomorphism):
        psi_representative(z, y, 1, Derivation.partial(B, "z"))


def test_psi_of_the_example():
    from lnd.fixtures import EX1_D

    a = psi_representative(EX1_ALPHA_Y, EX1_ALPHA_Z, x * x, EX1_D, "Q(x)")
    assert level(a) == 4


@pytest.mark.parametrize("P, Q, field, expected", [
    ("y", "z + y^2", "Q", True),
    ("y", "z/x", "Q(x)", False),
    ("y", "x*z + y", "Q(x)", False),
    ("y + x", "z + x*y^2", "Q(x)", True),
])
def test_is_B_automorphism(P, Q, field, expected):
    assert is_B_automorphism(pa(P, Q, field)) == expected


def test_example_alpha_is_not_a_B_automorphism():
    # its inverse recovers y as (P + sigma^2)/x
    assert not is_B_automorphism(ALPHA)


def test_serialization():
    w = decompose_tame(ALPHA)
    back = DecompositionWord.from_dict(w.to_dict())
    assert back.recompose() == ALPHA
    assert PlaneAutomorphism.from_dict(ALPHA.to_dict()) == ALPHA
