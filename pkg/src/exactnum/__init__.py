"""
Exact number module - Rationals, square-root classes, quadratic fields and
rational-cosine criteria.
"""

from .rationals import (
    Rational,
    RationalValue,
    IrrationalReal,
    Imaginary,
    SqrtClass,
    as_rational,
    parse_rational,
    format_rational,
    is_integer,
    denominator_N,
    rational_sqrt,
    sqrt_classify,
    format_sqrt_class,
    parse_sqrt_class,
)
from .quadext import (
    QuadExt,
    parse_quadext,
    quad_arith,
    to_float,
    to_complex,
    rational_part_of_sum,
)
from .berger import berger_independent, cos_pi_is_rational, rational_cos_pi

__all__ = [
    'Rational', 'RationalValue', 'IrrationalReal', 'Imaginary', 'SqrtClass',
    'as_rational', 'parse_rational', 'format_rational', 'is_integer',
    'denominator_N', 'rational_sqrt', 'sqrt_classify', 'format_sqrt_class',
    'parse_sqrt_class', 'QuadExt', 'parse_quadext', 'quad_arith', 'to_float',
    'to_complex', 'rational_part_of_sum', 'berger_independent',
    'cos_pi_is_rational', 'rational_cos_pi',
]
