"""
Truncated Frobenius and Laurent series u^λ·Σ cₙuⁿ with exact coefficients.

The local variable u is z − z₀ at a finite point and w = 1/z at infinity.
A series stores exactly the coefficients it knows: ``truncation_order`` is the
number of stored terms, so cₙ is exact for n < truncation_order and unknown
beyond.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Sequence, Tuple, Union

import mpmath

from exactnum import QuadExt, as_rational, format_rational, parse_quadext, parse_rational, to_complex
from utils.errors import ExpansionPointMismatch, InsufficientTruncation, PreconditionViolation

ZERO_Q = QuadExt(0)
ONE_Q = QuadExt(1)


class PointAtInfinity(Enum):
    INFINITY = "inf"

    def __str__(self):
        return "inf"


INFINITY = PointAtInfinity.INFINITY
Point = Union[QuadExt, PointAtInfinity]


def coerce_point(point) -> Point:
    if isinstance(point, PointAtInfinity) or point == "inf":
        return INFINITY
    return QuadExt.coerce(point)


def format_point(point: Point) -> str:
    return str(point)


def parse_point(text: str) -> Point:
    return INFINITY if text == "inf" else parse_quadext(text)


@dataclass(frozen=True)
class FrobeniusSeries:
    """u^exponent·(c₀ + c₁u + …) truncated after ``truncation_order`` terms."""

    expansion_point: Point
    exponent: Fraction
    coefficients: Tuple[QuadExt, ...]

    def __post_init__(self):
        object.__setattr__(self, "expansion_point", coerce_point(self.expansion_point))
        object.__setattr__(self, "exponent", as_rational(self.exponent))
        object.__setattr__(self, "coefficients", tuple(QuadExt.coerce(c) for c in self.coefficients))

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients)

    @property
    def at_infinity(self) -> bool:
        return self.expansion_point is INFINITY

    def coefficient(self, power) -> QuadExt:
        """Exact coefficient of u^power."""
        offset = as_rational(power) - self.exponent
        if offset.denominator != 1 or offset < 0:
            return ZERO_Q
        index = int(offset)
        if index >= self.truncation_order:
            raise InsufficientTruncation(
                f"coefficient of u^{format_rational(as_rational(power))} needs {index + 1} terms, "
                f"series has {self.truncation_order}")
        return self.coefficients[index]

    def scale(self, factor) -> "FrobeniusSeries":
        factor = QuadExt.coerce(factor)
        return FrobeniusSeries(self.expansion_point, self.exponent,
                               tuple(c * factor for c in self.coefficients))

    def shift(self, power) -> "FrobeniusSeries":
        """Multiply by u^power."""
        return FrobeniusSeries(self.expansion_point, self.exponent + as_rational(power), self.coefficients)

    def truncate(self, n_terms: int) -> "FrobeniusSeries":
        return FrobeniusSeries(self.expansion_point, self.exponent, self.coefficients[:n_terms])

    def derivative(self) -> "FrobeniusSeries":
        """d/du, term by term (at infinity this is d/dw)."""
        coefficients = tuple(c * (self.exponent + n) for n, c in enumerate(self.coefficients))
        return FrobeniusSeries(self.expansion_point, self.exponent - 1, coefficients)

    def reciprocal(self) -> "FrobeniusSeries":
        """1/s for a series with a nonzero leading coefficient."""
        if not self.coefficients or self.coefficients[0].is_zero:
            raise PreconditionViolation("reciprocal needs a nonzero leading coefficient")
        inverse = _power_series_inverse(self.coefficients, self.truncation_order)
        return FrobeniusSeries(self.expansion_point, -self.exponent, inverse)

    def evaluate(self, radius, angle, precision: int = 53) -> mpmath.mpc:
        """
        Value at u = radius·e^{i·angle} on the branch continuous in angle.

        u^λ is taken as radius^λ·e^{iλ·angle}, so sweeping angle past 2π
        follows the analytic continuation rather than the principal branch.
        """
        with mpmath.workprec(precision):
            rho = mpmath.mpf(radius)
            theta = mpmath.mpf(angle)
            u = mpmath.mpc(rho * mpmath.cos(theta), rho * mpmath.sin(theta))
            total = mpmath.mpc(0)
            for c in reversed(self.coefficients):
                total = total * u + to_complex(c, precision)
            lam = mpmath.mpf(self.exponent.numerator) / self.exponent.denominator
            prefactor = mpmath.power(rho, lam) * mpmath.expj(lam * theta)
            return prefactor * total

    def __add__(self, other):
        if not isinstance(other, FrobeniusSeries):
            return NotImplemented
        return series_add(self, other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, FrobeniusSeries):
            return NotImplemented
        return series_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, FrobeniusSeries):
            return series_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def format(self) -> str:
        if self.at_infinity:
            var = "(1/z)"
        elif self.expansion_point.is_zero:
            var = "z"
        else:
            var = f"(z-({self.expansion_point}))"
        parts = []
        for n, c in enumerate(self.coefficients):
            if n == 0:
                parts.append(f"{c}")
            elif n == 1:
                parts.append(f"{c}*{var}")
            else:
                parts.append(f"{c}*{var}^{n}")
        return f"{var}^({format_rational(self.exponent)}) * [{' + '.join(parts)} + …]"

    def __str__(self):
        return self.format()

    def to_dict(self) -> dict:
        return {
            "point": format_point(self.expansion_point),
            "exponent": format_rational(self.exponent),
            "coefficients": [str(c) for c in self.coefficients],
            "truncation_order": self.truncation_order,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FrobeniusSeries":
        return cls(parse_point(payload["point"]), parse_rational(payload["exponent"]),
                   tuple(parse_quadext(c) for c in payload["coefficients"]))


def _power_series_inverse(coefficients: Sequence[QuadExt], n_terms: int) -> Tuple[QuadExt, ...]:
    inverse_lead = coefficients[0].inverse()
    inverse = [inverse_lead]
    for n in range(1, n_terms):
        acc = ZERO_Q
        for k in range(1, min(n, len(coefficients) - 1) + 1):
            acc = acc + coefficients[k] * inverse[n - k]
        inverse.append(-acc * inverse_lead)
    return tuple(inverse)


def _check_points(first: FrobeniusSeries, second: FrobeniusSeries):
    if first.expansion_point != second.expansion_point:
        raise ExpansionPointMismatch(
            f"series expanded at {first.expansion_point} and {second.expansion_point}")


def _mul_pair(first: FrobeniusSeries, second: FrobeniusSeries) -> FrobeniusSeries:
    _check_points(first, second)
    n_terms = min(first.truncation_order, second.truncation_order)
    a, b = first.coefficients, second.coefficients
    coefficients = []
    for m in range(n_terms):
        acc = ZERO_Q
        for i in range(m + 1):
            if not a[i].is_zero and not b[m - i].is_zero:
                acc = acc + a[i] * b[m - i]
        coefficients.append(acc)
    return FrobeniusSeries(first.expansion_point, first.exponent + second.exponent, tuple(coefficients))


def series_mul(*series: FrobeniusSeries) -> FrobeniusSeries:
    """
    Truncated product with exponents added.

    The result keeps min(truncation orders) terms: the first n product
    coefficients only involve the first n coefficients of each factor.

    Raises:
        ExpansionPointMismatch: When the factors are expanded at different points
    """
    if not series:
        raise ValueError("series_mul needs at least one factor")
    return reduce(_mul_pair, series)


def series_add(first: FrobeniusSeries, second: FrobeniusSeries) -> FrobeniusSeries:
    """Sum of two series whose exponents differ by an integer."""
    _check_points(first, second)
    gap = second.exponent - first.exponent
    if gap.denominator != 1:
        raise PreconditionViolation("cannot add series whose exponents differ by a non-integer")
    low = min(first.exponent, second.exponent)
    top = min(first.exponent + first.truncation_order, second.exponent + second.truncation_order)
    n_terms = max(int(top - low), 0)
    coefficients = []
    for n in range(n_terms):
        power = low + n
        coefficients.append(first.coefficient(power) + second.coefficient(power))
    return FrobeniusSeries(first.expansion_point, low, tuple(coefficients))


def residue_at(series: FrobeniusSeries, point) -> QuadExt:
    """
    Exact residue at ``point``.

    At a finite point this is the coefficient of (z − z₀)⁻¹; a series with
    no such power (non-integral exponent offset, or starting above −1) has
    residue 0. At infinity the residue is −[w¹].

    Raises:
        ExpansionPointMismatch: When point differs from the expansion point
        InsufficientTruncation: When the series stops before the needed term
    """
    point = coerce_point(point)
    if point != series.expansion_point:
        raise ExpansionPointMismatch(f"series at {series.expansion_point}, residue requested at {point}")
    if point is INFINITY:
        return -series.coefficient(1)
    return series.coefficient(-1)
