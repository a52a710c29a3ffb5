"""Laurent expansion of the Weierstrass ℘ function at t = 0."""

from fractions import Fraction

from exactnum import QuadExt, as_rational
from fuchsian import FrobeniusSeries
from utils.errors import PreconditionViolation


def weierstrass_coefficients(g2, g3, count: int):
    """
    c₂, c₃, …, c_count of ℘ = t⁻² + Σ c_k t^(2k−2).

    c₂ = g₂/20, c₃ = g₃/28 and, for k ≥ 4,
    c_k = 3/((2k+1)(k−3)) · Σ_{m=2}^{k−2} c_m·c_{k−m}.
    """
    g2, g3 = as_rational(g2), as_rational(g3)
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, count + 1):
        total = sum((c[m] * c[k - m] for m in range(2, k - 1)), Fraction(0))
        c[k] = Fraction(3, (2 * k + 1) * (k - 3)) * total
    return {k: v for k, v in c.items() if k <= count}


def weierstrass_series(g2, g3, order: int) -> FrobeniusSeries:
    """
    ℘(t) at t = 0 as a series with exponent −2 and ``order`` coefficients.

    Index j of the coefficient tuple multiplies t^(j−2).

    Raises:
        PreconditionViolation: If order < 4
    """
    if order < 4:
        raise PreconditionViolation("weierstrass_series needs order >= 4")
    coefficients = [QuadExt(0)] * order
    coefficients[0] = QuadExt(1)
    for k, value in weierstrass_coefficients(g2, g3, order // 2).items():
        if 2 * k < order:
            coefficients[2 * k] = QuadExt(value)
    return FrobeniusSeries(QuadExt(0), -2, tuple(coefficients))
