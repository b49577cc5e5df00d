"""Exact integer linear algebra and sparse Laurent polynomial arithmetic."""

from .linalg import (
    ElementaryDivisors,
    Lattice,
    QuotientGroup,
    determinant,
    integer_kernel,
    lattice_quotient,
    smith_divisors,
    snf,
    solve_integer,
)
from .poly import (
    FrobeniusLift,
    LaurentPolynomial,
    PolyRing,
    exact_div_p,
    frobenius_substitute,
    is_prime,
    valuation,
)

__all__ = [
    "ElementaryDivisors", "Lattice", "QuotientGroup", "determinant", "integer_kernel",
    "lattice_quotient", "smith_divisors", "snf", "solve_integer",
    "FrobeniusLift", "LaurentPolynomial", "PolyRing", "exact_div_p",
    "frobenius_substitute", "is_prime", "valuation",
]
