"""Named examples used by the tests, the scripts and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .constructions import FamilyParamsEx1
from .derivations import Derivation, jacobian3
from .plane_autos import PlaneAutomorphism, compose, plane_ring
from .poly import B, Polynomial

x, y, z = B.gens()

# the homogeneous rank-3 example: Delta = Jac(u, v, .)
U = x * z - y ** 2
V = z * U ** 2 + 2 * x ** 2 * y * U + x ** 5
DELTA = jacobian3(U, V)

# rank-2 example that is not triangularizable
EX1_PARAMS = FamilyParamsEx1("x", "x", "t^2", "t^2")
EX1_D = Derivation.from_map(B, {
    "x": "0",
    "y": "2*x*(x*z - y^2)",
    "z": "x + 4*y*(x*z - y^2)",
})
EX1_ALPHA_Y = x * y - (x * z - y ** 2) ** 2
EX1_ALPHA_Z = x * z - y ** 2

# plane maps over Q(x): the swap and beta = (y, xz - y^2)
_K = plane_ring("Q(x)")
THETA = PlaneAutomorphism.swap(_K)
BETA = PlaneAutomorphism.of("y", "x*z - y^2", "Q(x)")


def theta_beta_power(k: int) -> PlaneAutomorphism:
    """(theta o beta)^k."""
    out = PlaneAutomorphism.identity(_K)
    step = compose(THETA, BETA)
    for _ in range(k):
        out = compose(step, out)
    return out


# three swaps in its word; whether fewer suffice after composing with
# automorphisms of B is not decided here
PHI_CANDIDATE = theta_beta_power(3)
PHI_SWAP_UPPER_BOUND = 3

# not locally nilpotent: D^2(x) = x
SEMISIMPLE = Derivation.from_map(B, {"x": "y", "y": "x", "z": "0"})
ROTATION = Derivation.from_map(B, {"x": "-y", "y": "x", "z": "0"})


@dataclass(frozen=True)
class TriangularFixture:
    """D = a(x) dy + b(x, y) dz with kernel element h and local slice g.

    g = y + P(x, h), so D(g) = a(x) lies in Q[x].
    """

    name: str
    a: str
    b: str
    h: str
    extra: str  # P(x, h) as a polynomial in x, y, z

    @property
    def derivation(self) -> Derivation:
        return Derivation.from_map(B, {"x": "0", "y": self.a, "z": self.b})

    @property
    def kernel_element(self) -> Polynomial:
        return B(self.h)

    @property
    def local_slice(self) -> Polynomial:
        return y + B(self.extra)

    @property
    def slice_value(self) -> Polynomial:
        return B(self.a)


def _tri(name, a, b, h, extra="0"):
    return TriangularFixture(name, a, b, h, extra.replace("H", f"({h})"))


TRIANGULAR = (
    _tri("dy", "1", "0", "z"),
    _tri("dy+y*dz", "1", "y", "2*z - y^2", "H"),
    _tri("x*dy+2y*dz", "x", "2*y", "x*z - y^2", "H^2"),
    _tri("x*dy+y*dz", "x", "y", "2*x*z - y^2"),
    _tri("x^2*dy+y^2*dz", "x^2", "y^2", "3*x^2*z - y^3", "x*H"),
    _tri("dy+xy*dz", "1", "x*y", "2*z - x*y^2", "H^2 + x"),
    _tri("(x+1)*dy+y^3*dz", "x + 1", "y^3", "4*(x + 1)*z - y^4"),
    _tri("x*dy+(x+y)*dz", "x", "x + y", "2*x*z - 2*x*y - y^2", "H"),
    _tri("2*dy+(y^2+x^3)*dz", "2", "y^2 + x^3", "6*z - y^3 - 3*x^3*y", "x^2 - H"),
    _tri("x^3*dy+(1+x*y)*dz", "x^3", "1 + x*y", "2*x^3*z - 2*y - x*y^2", "H + x*H^2"),
)
