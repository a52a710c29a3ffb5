"""
Fuchsian module - Local analysis of second-order linear ODEs in partial-fraction
form: indicial exponents, Frobenius series, Laurent algebra, residues and
monodromy trace data.
"""

from .series import (
    INFINITY,
    Point,
    FrobeniusSeries,
    coerce_point,
    format_point,
    parse_point,
    series_mul,
    series_add,
    residue_at,
)
from .rational_functions import PoleTerm, PartialFractions, partial_fractions
from .ode import (
    DEFAULT_TRUNCATION_ORDER,
    FuchsODE,
    LocalData,
    IndicialPair,
    LocalPair,
    TracePoint,
    TraceData,
    indicial_exponents,
    frobenius_expand,
    frobenius_from_local,
    ode_defect,
    defect_from_local,
    abel_factor,
    wronskian,
    normalized_wronskian,
    normalized_local_pair,
    trace_data,
)

__all__ = [
    'INFINITY', 'Point', 'FrobeniusSeries', 'coerce_point', 'format_point',
    'parse_point', 'series_mul', 'series_add', 'residue_at', 'PoleTerm',
    'PartialFractions', 'partial_fractions', 'DEFAULT_TRUNCATION_ORDER',
    'FuchsODE', 'LocalData', 'IndicialPair', 'LocalPair', 'TracePoint',
    'TraceData', 'indicial_exponents', 'frobenius_expand',
    'frobenius_from_local', 'ode_defect', 'defect_from_local', 'abel_factor',
    'wronskian', 'normalized_wronskian', 'normalized_local_pair', 'trace_data',
]
