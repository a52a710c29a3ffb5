"""
First variational equations along the invariant plane r = p_r = 0, written
in the variable z.

With ż² = −2z²(Ez² + Cz + B) at h = 0, the normal equation is

    ξ'' + a(z)ξ' + b(z)ξ = 0,
    a = (4Ez² + 3Cz + 2B) / (2z(Ez² + Cz + B)),
    b = −(Fz² + Dz + A) / (z²(Ez² + Cz + B)),

and the tangential one shares a with b₁₂ = −(6Ez² + 3Cz + B)/(z²(Ez² + Cz + B)).
"""

from fuchsian import FuchsODE, partial_fractions
from .params import TrapParams, generic_roots


def _coefficient_a(params: TrapParams):
    z1, z2, _ = generic_roots(params)
    return partial_fractions([2 * params.B, 3 * params.C, 4 * params.E], 2 * params.E,
                             [(0, 1), (z1, 1), (z2, 1)])


def _denominator_roots(params: TrapParams):
    z1, z2, _ = generic_roots(params)
    return [(0, 2), (z1, 1), (z2, 1)]


def build_nve(params: TrapParams) -> FuchsODE:
    """
    Normal variational equation with singular points {0, z₁, z₂, ∞}.

    Raises:
        DegenerateBranch: Outside the generic branch
    """
    a = _coefficient_a(params)
    b = partial_fractions([-params.A, -params.D, -params.F], params.E, _denominator_roots(params))
    return FuchsODE(a, b, name="NVE")


def build_tangential_ve(params: TrapParams) -> FuchsODE:
    """
    Tangential variational equation for ξ₁₂; its exponent-½ solution at z₁ is ż.

    Raises:
        DegenerateBranch: Outside the generic branch
    """
    a = _coefficient_a(params)
    b = partial_fractions([-params.B, -3 * params.C, -6 * params.E], params.E, _denominator_roots(params))
    return FuchsODE(a, b, name="TVE")
