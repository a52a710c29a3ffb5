"""
Rational functions in exact partial-fraction form over ℚ(√d).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Sequence, Tuple

import mpmath
import sympy

from exactnum import QuadExt, parse_quadext, to_complex
from utils.errors import PreconditionViolation, RadicandMismatch
from .series import INFINITY, ONE_Q, ZERO_Q, FrobeniusSeries, Point, coerce_point


@dataclass(frozen=True)
class PoleTerm:
    """coefficient / (z − pole)^order"""

    pole: QuadExt
    order: int
    coefficient: QuadExt

    def __post_init__(self):
        object.__setattr__(self, "pole", QuadExt.coerce(self.pole))
        object.__setattr__(self, "coefficient", QuadExt.coerce(self.coefficient))
        if self.order < 1:
            raise ValueError("pole order must be positive")


@dataclass(frozen=True)
class PartialFractions:
    """Σ cᵢ/(z − Pᵢ)^kᵢ + Σ cⱼ·z^j with nonzero coefficients and distinct (pole, order) pairs."""

    terms: Tuple[PoleTerm, ...] = ()
    polynomial: Tuple[Tuple[int, QuadExt], ...] = ()

    def __post_init__(self):
        merged: Dict[Tuple[QuadExt, int], QuadExt] = {}
        for term in self.terms:
            key = (term.pole, term.order)
            merged[key] = merged.get(key, ZERO_Q) + term.coefficient
        terms = tuple(PoleTerm(pole, order, c) for (pole, order), c in merged.items() if not c.is_zero)
        powers: Dict[int, QuadExt] = {}
        for power, c in self.polynomial:
            if power < 0:
                raise ValueError("polynomial part takes nonnegative powers")
            powers[power] = powers.get(power, ZERO_Q) + QuadExt.coerce(c)
        polynomial = tuple((power, c) for power, c in sorted(powers.items()) if not c.is_zero)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "polynomial", polynomial)

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.polynomial

    def poles(self) -> List[QuadExt]:
        seen: List[QuadExt] = []
        for term in self.terms:
            if term.pole not in seen:
                seen.append(term.pole)
        return seen

    def pole_order_at(self, point) -> int:
        point = QuadExt.coerce(point)
        return max((t.order for t in self.terms if t.pole == point), default=0)

    @property
    def polynomial_degree(self) -> int:
        return max((power for power, _ in self.polynomial), default=-1)

    def residue(self, pole) -> QuadExt:
        pole = QuadExt.coerce(pole)
        for term in self.terms:
            if term.pole == pole and term.order == 1:
                return term.coefficient
        return ZERO_Q

    def evaluate(self, z) -> QuadExt:
        z = QuadExt.coerce(z)
        total = ZERO_Q
        for term in self.terms:
            total = total + term.coefficient / (z - term.pole) ** term.order
        for power, c in self.polynomial:
            total = total + c * z ** power
        return total

    def numeric(self, precision: int = 53) -> Callable:
        """
        Evaluator for the numeric oracles.

        At 53 bits this is plain complex arithmetic. Above that the poles and
        coefficients are mpmath.mpc values at ``precision`` bits and the sum is
        taken at whatever mpmath precision is active when the evaluator is called.
        """
        if precision <= 53:
            terms = [(complex(to_complex(t.pole, precision)), t.order, complex(to_complex(t.coefficient, precision)))
                     for t in self.terms]
            polynomial = [(power, complex(to_complex(c, precision))) for power, c in self.polynomial]
            zero = 0j
        else:
            terms = [(to_complex(t.pole, precision), t.order, to_complex(t.coefficient, precision))
                     for t in self.terms]
            polynomial = [(power, to_complex(c, precision)) for power, c in self.polynomial]
            zero = mpmath.mpc(0)

        def evaluate(z):
            total = zero
            for pole, order, c in terms:
                total += c / (z - pole) ** order
            for power, c in polynomial:
                total += c * z ** power
            return total

        return evaluate

    def scale(self, factor) -> "PartialFractions":
        factor = QuadExt.coerce(factor)
        return PartialFractions(tuple(PoleTerm(t.pole, t.order, t.coefficient * factor) for t in self.terms),
                                tuple((power, c * factor) for power, c in self.polynomial))

    def __add__(self, other: "PartialFractions") -> "PartialFractions":
        return PartialFractions(self.terms + other.terms, self.polynomial + other.polynomial)

    def __neg__(self):
        return self.scale(-1)

    def laurent_at(self, point: Point, n_terms: int, shift: int = 0) -> FrobeniusSeries:
        """
        Laurent expansion at ``point`` times u^shift, with n_terms exact coefficients.

        The expansion starts at the most negative power present, so a pole of
        order k at a finite point gives exponent −k + shift.
        """
        point = coerce_point(point)
        if point is INFINITY:
            low = -max(self.polynomial_degree, 0)
            coefficients = self._coefficients_at_infinity(low, n_terms)
        else:
            low = -self.pole_order_at(point)
            coefficients = self._coefficients_at(point, low, n_terms)
        return FrobeniusSeries(point, low + shift, tuple(coefficients))

    def _coefficients_at(self, s: QuadExt, low: int, n_terms: int) -> List[QuadExt]:
        coefficients = [ZERO_Q] * n_terms
        top = low + n_terms
        for term in self.terms:
            k, c = term.order, term.coefficient
            if term.pole == s:
                if -k < top:
                    coefficients[-k - low] += c
                continue
            delta = s - term.pole
            inverse_delta = delta.inverse()
            # c·Σ (−1)ⁿ C(k+n−1, n) δ^(−k−n) uⁿ
            factor = c * inverse_delta ** k
            for n in range(max(top, 0)):
                if n >= low:
                    sign = -1 if n % 2 else 1
                    coefficients[n - low] += factor * (sign * comb(k + n - 1, n))
                factor = factor * inverse_delta
        for power, c in self.polynomial:
            # c·(s + u)^j
            for i in range(power + 1):
                if low <= i < top:
                    coefficients[i - low] += c * comb(power, i) * s ** (power - i)
        return coefficients

    def _coefficients_at_infinity(self, low: int, n_terms: int) -> List[QuadExt]:
        coefficients = [ZERO_Q] * n_terms
        top = low + n_terms
        for term in self.terms:
            k, c, pole = term.order, term.coefficient, term.pole
            # c·w^k·(1 − P·w)^(−k) = c·Σ C(k+n−1, n) Pⁿ w^(k+n)
            factor = c
            for n in range(max(top - k, 0)):
                if k + n >= low:
                    coefficients[k + n - low] += factor * comb(k + n - 1, n)
                factor = factor * pole
        for power, c in self.polynomial:
            if low <= -power < top:
                coefficients[-power - low] += c
        return coefficients

    def to_dict(self) -> dict:
        return {
            "terms": [{"pole": str(t.pole), "order": t.order, "coefficient": str(t.coefficient)}
                      for t in self.terms],
            "polynomial": [{"power": power, "coefficient": str(c)} for power, c in self.polynomial],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PartialFractions":
        terms = tuple(PoleTerm(parse_quadext(t["pole"]), int(t["order"]), parse_quadext(t["coefficient"]))
                      for t in payload.get("terms", []))
        polynomial = tuple((int(p["power"]), parse_quadext(p["coefficient"])) for p in payload.get("polynomial", []))
        return cls(terms, polynomial)

    def __str__(self):
        parts = [f"({t.coefficient})/(z-({t.pole}))^{t.order}" for t in self.terms]
        parts += [f"({c})*z^{power}" for power, c in self.polynomial]
        return " + ".join(parts) if parts else "0"


# -- polynomials over ℚ(√d), carried by sympy ------------------------------

_Z = sympy.Symbol("z")


def _common_radicand(values: Sequence[QuadExt]) -> Fraction:
    radicand = Fraction(0)
    for value in values:
        if value.is_rational:
            continue
        if radicand == 0:
            radicand = value.d
        elif value.d != radicand:
            raise RadicandMismatch(f"coefficients span Q(sqrt({radicand})) and Q(sqrt({value.d}))")
    return radicand


@lru_cache(maxsize=None)
def _domain(radicand: Fraction):
    """QQ, or QQ<√d> with √d as the primitive element."""
    if radicand == 0:
        return sympy.QQ
    return sympy.QQ.algebraic_field(sympy.sqrt(sympy.Rational(radicand.numerator, radicand.denominator)))


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _to_element(x: QuadExt, radicand: Fraction):
    domain = _domain(radicand)
    if x.is_rational:
        return domain.convert(_rational(x.a))
    return domain.from_sympy(_rational(x.a) + _rational(x.b) * sympy.sqrt(_rational(radicand)))


def _from_element(element, radicand: Fraction) -> QuadExt:
    if radicand == 0:
        return QuadExt(_fraction(element))
    # dense in powers of √d, highest first
    coefficients = [_fraction(c) for c in element.to_list()]
    coefficients = [Fraction(0)] * (2 - len(coefficients)) + coefficients
    return QuadExt(coefficients[1], coefficients[0], radicand)


def _poly(coefficients: Sequence[QuadExt], radicand: Fraction) -> sympy.Poly:
    """Ascending coefficients as a sympy.Poly in z."""
    elements = [_to_element(c, radicand) for c in reversed(coefficients)]
    domain = _domain(radicand)
    return sympy.Poly.from_list(elements or [domain.zero], _Z, domain=domain)


def _coefficients(poly: sympy.Poly, radicand: Fraction) -> List[QuadExt]:
    """Ascending coefficients of a Poly, back in QuadExt; [] for the zero polynomial."""
    return [_from_element(c, radicand) for c in reversed(poly.rep.to_list())]


def partial_fractions(numerator: Sequence, leading, roots: Sequence[Tuple[object, int]]) -> PartialFractions:
    """
    Exact decomposition of N(z) / (leading·Π(z − Pᵢ)^mᵢ).

    The division, Taylor shifts and truncated inverses run on sympy
    polynomials over ℚ(√d); only the results come back as QuadExt.

    Args:
        numerator: Coefficients of N in ascending powers
        leading: Nonzero constant factor of the denominator
        roots: Distinct roots Pᵢ with multiplicities mᵢ

    Returns:
        PartialFractions with the polynomial quotient as its polynomial part

    Raises:
        RadicandMismatch: When the inputs do not share one quadratic field
    """
    numerator = [QuadExt.coerce(c) for c in numerator]
    leading = QuadExt.coerce(leading)
    roots = [(QuadExt.coerce(pole), int(m)) for pole, m in roots]
    if leading.is_zero:
        raise PreconditionViolation("leading coefficient of the denominator is zero")
    if len({pole for pole, _ in roots}) != len(roots):
        raise PreconditionViolation("roots must be distinct")

    radicand = _common_radicand([*numerator, leading, *(pole for pole, _ in roots)])
    linear = {pole: _poly([-pole, ONE_Q], radicand) for pole, _ in roots}
    denominator = _poly([leading], radicand)
    for pole, m in roots:
        denominator *= linear[pole] ** m
    quotient, remainder = _poly(numerator, radicand).div(denominator)

    terms: List[PoleTerm] = []
    for pole, m in roots:
        cofactor = _poly([leading], radicand)
        for other, other_m in roots:
            if other != pole:
                cofactor *= linear[other] ** other_m
        # Taylor coefficients of remainder / cofactor at the pole, up to u^(m-1)
        shift = _to_element(pole, radicand)
        truncation = sympy.Poly(_Z ** m, _Z, domain=_domain(radicand))
        local = remainder.shift(shift) * cofactor.shift(shift).invert(truncation)
        g = _coefficients(local.rem(truncation), radicand)
        for t, c in enumerate(g):
            terms.append(PoleTerm(pole, m - t, c))
    polynomial = tuple((power, c) for power, c in enumerate(_coefficients(quotient, radicand)))
    return PartialFractions(tuple(terms), polynomial)
