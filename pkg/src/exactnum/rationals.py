"""
Reduced rationals, square-root classification and denominators.

``fractions.Fraction`` is the rational type throughout the package; it keeps
numerator and denominator reduced with a positive denominator after every
operation and uses arbitrary precision integers.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from utils.errors import ParseError

Rational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


def as_rational(value) -> Fraction:
    """
    Coerce an exact scalar to a Fraction.

    Floats are rejected: the exact core never accepts rounded input.

    Raises:
        TypeError: If value is not an int or Fraction
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str, flag: Optional[str] = None) -> Fraction:
    """
    Parse "n/d" or "n" (ASCII, no whitespace).

    Args:
        text: Rational in canonical syntax
        flag: Name of the originating option, reported in errors

    Returns:
        Reduced Fraction

    Raises:
        ParseError: On malformed text or a zero denominator
    """
    where = f" for {flag}" if flag else ""
    if not isinstance(text, str) or not _RATIONAL_PATTERN.match(text):
        raise ParseError(f"not a rational{where}: {text!r}", flag=flag)
    if "/" in text:
        numerator, denominator = text.split("/")
        if int(denominator) == 0:
            raise ParseError(f"zero denominator{where}: {text!r}", flag=flag)
        return Fraction(int(numerator), int(denominator))
    return Fraction(int(text))


def format_rational(value: RationalLike) -> str:
    """Print as "n/d", or "n" for integers."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_integer(value: RationalLike) -> bool:
    return as_rational(value).denominator == 1


def denominator_N(r: RationalLike) -> int:
    """Positive denominator of the reduced fraction; 1 for integers."""
    return as_rational(r).denominator


def _integer_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    root = math.isqrt(n)
    return root if root * root == n else None


def rational_sqrt(r: RationalLike) -> Optional[Fraction]:
    """Nonnegative rational square root of r, or None when r is not a rational square."""
    r = as_rational(r)
    num = _integer_sqrt(r.numerator)
    den = _integer_sqrt(r.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


@dataclass(frozen=True)
class RationalValue:
    """√r is the nonnegative rational ``value``."""

    value: Fraction

    @property
    def radicand(self) -> Fraction:
        return self.value * self.value

    @property
    def is_rational(self) -> bool:
        return True


@dataclass(frozen=True)
class IrrationalReal:
    """√radicand with a positive non-square radicand."""

    radicand: Fraction

    @property
    def is_rational(self) -> bool:
        return False


@dataclass(frozen=True)
class Imaginary:
    """√radicand with a negative radicand."""

    radicand: Fraction

    @property
    def is_rational(self) -> bool:
        return False


SqrtClass = Union[RationalValue, IrrationalReal, Imaginary]


def sqrt_classify(r: RationalLike) -> SqrtClass:
    """
    Classify √r.

    Returns RationalValue when numerator and denominator of the reduced r are
    perfect squares (the nonnegative root), Imaginary when r < 0 and
    IrrationalReal otherwise.
    """
    r = as_rational(r)
    if r < 0:
        return Imaginary(r)
    root = rational_sqrt(r)
    if root is not None:
        return RationalValue(root)
    return IrrationalReal(r)


def format_sqrt_class(value: SqrtClass) -> str:
    if isinstance(value, RationalValue):
        return format_rational(value.value)
    return f"sqrt({format_rational(value.radicand)})"


def parse_sqrt_class(text: str) -> SqrtClass:
    if text.startswith("sqrt(") and text.endswith(")"):
        return sqrt_classify(parse_rational(text[5:-1]))
    value = parse_rational(text)
    if value < 0:
        raise ParseError(f"square roots are nonnegative: {text!r}")
    return RationalValue(value)
