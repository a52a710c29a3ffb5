"""
Variational equations module - Trap parameters, the normal and tangential
variational equations, second-order sources and residues, and the Lamé,
Whittaker and confluent Heun reductions.
"""

from .params import (
    PARAMETER_NAMES,
    TrapParams,
    DerivedQuantities,
    derive,
    generic_roots,
    p_squared,
    q_squared,
)
from .nve import build_nve, build_tangential_ve
from .second_order import (
    COMPONENTS,
    CoefficientCheck,
    PointResidues,
    SourceTerm,
    Ve2Data,
    closed_form_residue,
    displayed_product_residue,
    local_bases,
    point_location,
    printed_coefficient_checks,
    source_terms,
    ve2_residues,
    ve2_sources,
)
from .weierstrass import weierstrass_coefficients, weierstrass_series
from .lame import (
    LameData,
    PAlphaCoefficients,
    lame_coefficient_checks,
    lame_local_bases,
    lame_reduce,
    lame_residue,
    palpha_coefficients,
    printed_lame_residue,
)
from .reductions import ConfluentHeunData, WhittakerData, confluent_heun_reduce, whittaker_reduce

__all__ = [
    'PARAMETER_NAMES', 'TrapParams', 'DerivedQuantities', 'derive',
    'generic_roots', 'p_squared', 'q_squared', 'build_nve',
    'build_tangential_ve', 'COMPONENTS', 'CoefficientCheck', 'PointResidues',
    'SourceTerm', 'Ve2Data', 'closed_form_residue', 'displayed_product_residue',
    'local_bases', 'point_location', 'printed_coefficient_checks',
    'source_terms', 've2_residues', 've2_sources', 'weierstrass_coefficients',
    'weierstrass_series', 'LameData', 'PAlphaCoefficients',
    'lame_coefficient_checks', 'lame_local_bases', 'lame_reduce',
    'lame_residue', 'palpha_coefficients', 'printed_lame_residue',
    'ConfluentHeunData', 'WhittakerData', 'confluent_heun_reduce',
    'whittaker_reduce',
]
