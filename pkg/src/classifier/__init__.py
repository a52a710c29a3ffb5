"""
Classifier module - Verdicts, certificates and the decision tree over the
trap parameters.
"""

from .verdicts import Certificate, Finding, Verdict, VerdictTag
from .rules import (
    VMAX_PATTERNS,
    ThAResult,
    VMatch,
    abelian_candidate,
    case_b_test,
    confluent_heun_check,
    disjunctive_case_b,
    homogeneous_checks,
    literal_abelian_union,
    screen_conditions,
    signed_sums,
    thA_check,
    vmax_screen,
    whittaker_check,
)
from .decision_tree import classify, lame_branch

__all__ = [
    'Certificate', 'Finding', 'Verdict', 'VerdictTag', 'VMAX_PATTERNS',
    'ThAResult', 'VMatch', 'abelian_candidate', 'case_b_test',
    'confluent_heun_check', 'homogeneous_checks', 'literal_abelian_union',
    'disjunctive_case_b', 'screen_conditions', 'signed_sums', 'thA_check',
    'vmax_screen', 'whittaker_check', 'classify', 'lame_branch',
]
