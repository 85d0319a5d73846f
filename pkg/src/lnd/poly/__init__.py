"""Exact polynomial arithmetic over Q and Q(x)."""

from .functionals import (
    content_in_x,
    is_primitive,
    linear_part,
    linear_part_and_content,
    partial_derivative,
    substitute,
    weighted_degree,
    weighted_leading_form,
)
from .gcd import gcd_many, gcd_poly, lcm_poly, normalize
from .parse import format_poly, parse_poly
from .polynomial import Polynomial, divides, exact_div, normal_form_mod_principal
from .ratfunc import RationalFunction, clear_denominators, denominator_lcm
from .ring import B, Ring, to_q

__all__ = [
    "B", "Polynomial", "RationalFunction", "Ring", "clear_denominators", "content_in_x",
    "denominator_lcm", "divides", "exact_div", "format_poly", "gcd_many", "gcd_poly",
    "is_primitive", "lcm_poly", "linear_part", "linear_part_and_content", "normal_form_mod_principal",
    "normalize", "parse_poly", "partial_derivative", "substitute", "to_q", "weighted_degree",
    "weighted_leading_form",
]
