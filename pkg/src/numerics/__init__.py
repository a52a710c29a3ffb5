"""
Numerics module - Hamiltonian flow, Poincaré sections and the numeric
oracles that cross-check exact series and residues.
"""

from .flow import (
    IntegratorConfig,
    HamiltonianFlow,
    Trajectory,
    energy_drift_profile,
    hamiltonian_expression,
    integrate_flow,
    params_from_row,
    poincare_section,
    radial_energy,
    write_section_csv,
)
from .oracles import (
    contour_components,
    contour_residue,
    lame_contour_residue,
    series_vs_numeric,
)

__all__ = [
    'IntegratorConfig', 'HamiltonianFlow', 'Trajectory', 'energy_drift_profile',
    'hamiltonian_expression', 'integrate_flow', 'params_from_row',
    'poincare_section', 'radial_energy', 'write_section_csv',
    'contour_components', 'contour_residue', 'lame_contour_residue',
    'series_vs_numeric',
]
