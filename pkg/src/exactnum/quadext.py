"""
Elements a + b·√d of a quadratic field ℚ(√d).

Rational elements carry ``b == 0`` and ``d == 0`` and coerce into any field.
Irrational elements keep a squarefree integer radicand, so ``√8`` is stored as
``2*sqrt(2)`` and ``QuadExt(3) + QuadExt(0, 2, 7)`` is ``3+2*sqrt(7)``. Two irrational
elements must share their radicand.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple, Union

import mpmath
import sympy

from utils.errors import (
    DivisionByZeroNorm,
    NegativeRadicandEmbedding,
    ParseError,
    RadicandMismatch,
)
from .rationals import (
    RationalLike,
    as_rational,
    format_rational,
    parse_rational,
    rational_sqrt,
    sqrt_classify,
    RationalValue,
)

_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_QUADEXT_PATTERN = re.compile(rf"^({_RATIONAL})\+({_RATIONAL})\*sqrt\(({_RATIONAL})\)$")

ZERO = Fraction(0)


@lru_cache(maxsize=None)
def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = s²·m with m squarefree; m carries the sign."""
    s, m = 1, (-1 if n < 0 else 1)
    for prime, power in sympy.factorint(abs(n)).items():
        s *= prime ** (power // 2)
        if power % 2:
            m *= prime
    return s, m


def squarefree_radicand(d: Fraction) -> Tuple[Fraction, Fraction]:
    """(s, m) with √d = s·√m and m a squarefree integer."""
    s, m = _squarefree_split(d.numerator * d.denominator)
    return Fraction(s, d.denominator), Fraction(m)


@dataclass(frozen=True, eq=False)
class QuadExt:
    """
    Exact element a + b·√d.

    Every value has one canonical form. A perfect-square radicand folds b·√d
    into a and any other radicand is reduced to its squarefree part.
    A vanishing b resets d to 0.
    """

    a: Fraction
    b: Fraction = ZERO
    d: Fraction = ZERO

    def __post_init__(self):
        a, b, d = as_rational(self.a), as_rational(self.b), as_rational(self.d)
        if b != 0:
            root = rational_sqrt(d)
            if root is not None:
                a, b = a + b * root, ZERO
            else:
                scale, d = squarefree_radicand(d)
                b = b * scale
        if b == 0:
            d = ZERO
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt(cls, r: RationalLike) -> "QuadExt":
        """√r on the positive branch (principal imaginary branch for r < 0)."""
        return cls(ZERO, Fraction(1), as_rational(r))

    @classmethod
    def coerce(cls, value: Union["QuadExt", RationalLike]) -> "QuadExt":
        if isinstance(value, QuadExt):
            return value
        return cls(as_rational(value))

    # -- structure -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is not rational")
        return self.a

    def _field(self, other: "QuadExt") -> Fraction:
        if self.b == 0:
            return other.d
        if other.b == 0 or self.d == other.d:
            return self.d
        raise RadicandMismatch(f"cannot combine elements of Q(sqrt({format_rational(self.d)})) "
                               f"and Q(sqrt({format_rational(other.d)}))")

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise DivisionByZeroNorm(f"{self} has norm 0")
        return QuadExt(self.a / n, -self.b / n, self.d)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        return QuadExt(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        return QuadExt(self.a * other.a + d * self.b * other.b,
                       self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadExt.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QuadExt(Fraction(1)), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return not self.is_zero

    # -- embeddings ------------------------------------------------------

    def to_float(self, precision: int = 53) -> mpmath.mpf:
        return to_float(self, precision)

    def to_complex(self, precision: int = 53) -> mpmath.mpc:
        return to_complex(self, precision)

    def __complex__(self):
        return complex(to_complex(self, 53))

    # -- text ------------------------------------------------------------

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)}+{format_rational(self.b)}*sqrt({format_rational(self.d)})"

    def __repr__(self):
        return f"QuadExt({self})"


Scalar = Union[QuadExt, int, Fraction]


def parse_quadext(text: str) -> QuadExt:
    """Inverse of ``str(QuadExt)``."""
    match = _QUADEXT_PATTERN.match(text)
    if match:
        a, b, d = (parse_rational(group) for group in match.groups())
        return QuadExt(a, b, d)
    try:
        return QuadExt(parse_rational(text))
    except ParseError:
        raise ParseError(f"not a quadratic-field element: {text!r}")


def quad_arith(x: Scalar, y: Scalar, op: str) -> QuadExt:
    """
    Exact field arithmetic in ℚ(√d).

    Args:
        x, y: Operands sharing a radicand (rationals coerce)
        op: 'add', 'sub', 'mul' or 'div'

    Raises:
        DivisionByZeroNorm: Division by an element of norm 0
        RadicandMismatch: Irrational operands over different radicands
    """
    x, y = QuadExt.coerce(x), QuadExt.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def _mpf_of(value: Fraction) -> mpmath.mpf:
    return mpmath.mpf(value.numerator) / value.denominator


def to_float(x: Scalar, precision: int = 53) -> mpmath.mpf:
    """
    Real embedding of a+b·√d on the positive branch of √d.

    The value is computed with guard bits and rounded once to ``precision``.

    Raises:
        NegativeRadicandEmbedding: When d < 0; use to_complex instead
    """
    x = QuadExt.coerce(x)
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    if x.d < 0:
        raise NegativeRadicandEmbedding(f"{x} has no real embedding")
    with mpmath.workprec(precision + 32):
        value = _mpf_of(x.a) + _mpf_of(x.b) * mpmath.sqrt(_mpf_of(x.d))
    with mpmath.workprec(precision):
        return +value


def to_complex(x: Scalar, precision: int = 53) -> mpmath.mpc:
    """Complex embedding; √d = i·√|d| for negative radicands."""
    x = QuadExt.coerce(x)
    with mpmath.workprec(precision + 32):
        if x.d < 0:
            value = mpmath.mpc(_mpf_of(x.a), _mpf_of(x.b) * mpmath.sqrt(_mpf_of(-x.d)))
        else:
            value = mpmath.mpc(_mpf_of(x.a) + _mpf_of(x.b) * mpmath.sqrt(_mpf_of(x.d)))
    with mpmath.workprec(precision):
        return +value


def rational_part_of_sum(terms: Iterable[Scalar]) -> Optional[Fraction]:
    """
    Exact value of a sum of quadratic irrationals over possibly different fields.

    Radicands whose ratio is a rational square are merged (b·√d₁ = b·s·√d₂
    with s = √(d₁/d₂)); after merging, the sum is rational iff every
    surviving irrational part cancels.

    Returns:
        The rational value of the sum, or None when it is irrational
    """
    rational = ZERO
    groups: List[Tuple[Fraction, Fraction]] = []
    for term in terms:
        term = QuadExt.coerce(term)
        rational += term.a
        if term.b == 0:
            continue
        for index, (radicand, coefficient) in enumerate(groups):
            ratio = sqrt_classify(term.d / radicand)
            if isinstance(ratio, RationalValue):
                groups[index] = (radicand, coefficient + term.b * ratio.value)
                break
        else:
            groups.append((term.d, term.b))
    if any(coefficient != 0 for _, coefficient in groups):
        return None
    return rational
