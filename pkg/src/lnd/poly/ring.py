"""Ring descriptors and exact rational coefficients.

Monomials are packed into a single Python int, one 32-bit field per variable,
with the *last* declared variable in the most significant field.  Comparing
``(total degree, packed)`` is then exactly graded lexicographic order with
the variables declared in increasing order (x < y < z for ``Ring("x,y,z")``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from gmpy2 import mpq

from ..errors import InputError, UnknownVariable

SHIFT = 32
MASK = (1 << SHIFT) - 1


def to_q(c):
    """Coerce ints, Fractions, strings like ``"-2/5"`` and mpq to mpq."""
    if isinstance(c, mpq):
        return c
    if isinstance(c, (int, Fraction)):
        return mpq(c)
    if isinstance(c, str):
        try:
            return mpq(c.strip())
        except ValueError as exc:
            raise InputError(f"not a rational literal: {c!r}") from exc
    try:
        return mpq(c)
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot use {c!r} as a rational coefficient") from exc


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over Q, or over Q(coeff_var) when ``coeff_var`` is set."""

    names: tuple
    coeff_var: str | None = None

    def __post_init__(self):
        if isinstance(self.names, str):
            object.__setattr__(self, "names", tuple(n.strip() for n in self.names.split(",") if n.strip()))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate variable names in {self.names}")
        if self.coeff_var is not None and self.coeff_var in self.names:
            raise InputError(f"coefficient variable {self.coeff_var!r} cannot also be a ring variable")

    @classmethod
    def parse(cls, spec: str, field: str = "Q") -> "Ring":
        field = field.replace(" ", "")
        if field in ("Q", "QQ"):
            return cls(spec)
        if field.startswith("Q(") and field.endswith(")"):
            return cls(spec, field[2:-1])
        raise InputError(f"unknown coefficient field {field!r}")

    @property
    def field(self) -> str:
        return "Q" if self.coeff_var is None else f"Q({self.coeff_var})"

    @property
    def nvars(self) -> int:
        return len(self.names)

    def spec(self) -> str:
        return ",".join(self.names)

    def __str__(self):
        return f"{self.field}[{self.spec()}]"

    @cached_property
    def _index(self):
        return {n: i for i, n in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r} in ring {self}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    @cached_property
    def guards(self) -> int:
        return sum(1 << (SHIFT * i + SHIFT - 1) for i in range(self.nvars))

    @cached_property
    def ord_shift(self) -> int:
        return SHIFT * self.nvars

    def pack(self, exps) -> int:
        m = 0
        for i, e in enumerate(exps):
            if e < 0:
                raise InputError("negative exponent")
            m |= e << (SHIFT * i)
        return m

    def unpack(self, m: int) -> tuple:
        return tuple((m >> (SHIFT * i)) & MASK for i in range(self.nvars))

    def mdeg(self, m: int) -> int:
        d = 0
        while m:
            d += m & MASK
            m >>= SHIFT
        return d

    def ordkey(self, m: int) -> int:
        return (self.mdeg(m) << self.ord_shift) | m

    def divides(self, a: int, b: int) -> bool:
        """True when monomial ``a`` divides monomial ``b``."""
        g = self.guards
        return ((b | g) - a) & g == g

    def unit_monomial(self, i: int, e: int = 1) -> int:
        return e << (SHIFT * i)

    # coefficient field

    def coerce(self, c):
        if self.coeff_var is None:
            return to_q(c)
        from .ratfunc import RationalFunction

        return RationalFunction.coerce(c, self.coeff_var)

    @cached_property
    def cone(self):
        return self.coerce(1)

    # constructors

    @property
    def zero(self):
        from .polynomial import Polynomial

        return Polynomial(self, {})

    @property
    def one(self):
        return self.const(1)

    def const(self, c):
        from .polynomial import Polynomial

        c = self.coerce(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, name: str):
        from .polynomial import Polynomial

        return Polynomial(self, {self.unit_monomial(self.index(name)): self.cone})

    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def __call__(self, text: str):
        from .parse import parse_poly

        return parse_poly(text, self)


B = Ring(("x", "y", "z"))
