"""
Rational cosines cos(π·r) and the Berger independence criterion.
"""

from fractions import Fraction
from typing import Optional

from utils.errors import PreconditionViolation
from .rationals import RationalLike, as_rational, denominator_N, is_integer


def cos_pi_is_rational(r: RationalLike) -> bool:
    """cos(π·r) is rational exactly when N(r) ∈ {1, 2, 3}."""
    return denominator_N(r) <= 3


def rational_cos_pi(r: RationalLike) -> Optional[Fraction]:
    """Exact cos(π·r) when it is rational, else None."""
    r = as_rational(r)
    n = r.denominator
    k = r.numerator
    if n == 1:
        return Fraction(1) if k % 2 == 0 else Fraction(-1)
    if n == 2:
        return Fraction(0)
    if n == 3:
        return Fraction(1, 2) if k % 6 in (1, 5) else Fraction(-1, 2)
    return None


def berger_independent(r1: RationalLike, r2: RationalLike) -> bool:
    """
    Decide whether {1, cos πr₁, cos πr₂} is linearly independent over ℚ.

    Holds iff N(r₁) ≥ 4, N(r₂) ≥ 4 and (N(r₁), N(r₂)) ≠ (5, 5). Denominators
    up to 3 give rational cosines and count as dependent.

    Raises:
        PreconditionViolation: When r₁ + r₂ or r₁ − r₂ is an integer
    """
    r1, r2 = as_rational(r1), as_rational(r2)
    if is_integer(r1 + r2) or is_integer(r1 - r2):
        raise PreconditionViolation(
            f"r1 ± r2 is an integer for r1={r1}, r2={r2}; the independence criterion does not apply")
    n1, n2 = denominator_N(r1), denominator_N(r2)
    return n1 >= 4 and n2 >= 4 and (n1, n2) != (5, 5)
