"""
Second variational equation along r = p_r = 0.

In the variable z the order-ε² corrections satisfy the first-order equations
with sources

    K₂⁽¹⁾ = (2Fz + D) / (z²(Ez² + Cz + B)) · ξ₁₁ξ₁₂
    K₂⁽²⁾ = [(2Fz + D)·ξ₁₁² + (12Ez + 3C)·ξ₁₂²] / (2z²(Ez² + Cz + B))

and a logarithm in the local solutions at z₁ or z₂ shows up as a nonzero
residue of a component of X⁻¹f₂.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from exactnum import QuadExt
from fuchsian import (
    FrobeniusSeries,
    LocalPair,
    PartialFractions,
    normalized_local_pair,
    partial_fractions,
    residue_at,
    series_add,
    series_mul,
)
from fuchsian.ode import DEFAULT_TRUNCATION_ORDER
from utils.errors import InsufficientTruncation, PreconditionViolation
from utils.logger import get_logger
from .nve import build_nve, build_tangential_ve
from .params import TrapParams, generic_roots, p_squared, q_squared

logger = get_logger(__name__)

MAX_TRUNCATION_ORDER = 48
POINTS = ("z1", "z2")
COMPONENTS = ("-xi11_2*K2_1", "xi11_1*K2_1", "-xi12_2*K2_2", "xi12_1*K2_2")


@dataclass(frozen=True)
class SourceTerm:
    """coefficient(z) · ξ_a · ξ_b"""

    coefficient: PartialFractions
    factors: Tuple[str, str]

    def to_dict(self) -> dict:
        return {"coefficient": self.coefficient.to_dict(), "factors": list(self.factors)}


@dataclass(frozen=True)
class PointResidues:
    point: str
    location: QuadExt
    components: Tuple[QuadExt, QuadExt, QuadExt, QuadExt]
    displayed_product: QuadExt
    closed_form: QuadExt
    truncation_order: int

    @property
    def any_nonzero(self) -> bool:
        return any(not c.is_zero for c in self.components)

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "location": str(self.location),
            "components": {name: str(value) for name, value in zip(COMPONENTS, self.components)},
            "displayed_product": str(self.displayed_product),
            "closed_form": str(self.closed_form),
            "truncation_order": self.truncation_order,
        }


@dataclass(frozen=True)
class CoefficientCheck:
    name: str
    printed: QuadExt
    computed: QuadExt

    @property
    def agrees(self) -> bool:
        return self.printed == self.computed

    def to_dict(self) -> dict:
        return {"name": self.name, "printed": str(self.printed), "computed": str(self.computed),
                "agrees": self.agrees}


@dataclass(frozen=True)
class Ve2Data:
    K2_1: Tuple[SourceTerm, ...]
    K2_2: Tuple[SourceTerm, ...]
    wronskian_constants: Dict[str, Dict[str, QuadExt]]
    component_residues: Dict[str, PointResidues]
    coefficient_checks: Tuple[CoefficientCheck, ...] = ()
    discrepancies: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def any_nonzero(self) -> bool:
        return any(r.any_nonzero for r in self.component_residues.values())

    def to_dict(self) -> dict:
        return {
            "K2_1": [term.to_dict() for term in self.K2_1],
            "K2_2": [term.to_dict() for term in self.K2_2],
            "wronskian_constants": {point: {k: str(v) for k, v in constants.items()}
                                    for point, constants in self.wronskian_constants.items()},
            "residues": {point: residues.to_dict() for point, residues in self.component_residues.items()},
            "coefficient_checks": [check.to_dict() for check in self.coefficient_checks],
        }


def source_terms(params: TrapParams) -> Tuple[Tuple[SourceTerm, ...], Tuple[SourceTerm, ...]]:
    """K₂⁽¹⁾ and K₂⁽²⁾ as exact coefficients times products of first-order solutions."""
    z1, z2, _ = generic_roots(params)
    roots = [(0, 2), (z1, 1), (z2, 1)]
    E = params.E
    mixed = partial_fractions([params.D, 2 * params.F], E, roots)
    normal_square = partial_fractions([params.D, 2 * params.F], 2 * E, roots)
    tangential_square = partial_fractions([3 * params.C, 12 * E], 2 * E, roots)
    first = (SourceTerm(mixed, ("xi11", "xi12")),)
    second = (SourceTerm(normal_square, ("xi11", "xi11")), SourceTerm(tangential_square, ("xi12", "xi12")))
    return first, second


def point_location(params: TrapParams, point: str) -> QuadExt:
    z1, z2, _ = generic_roots(params)
    if point == "z1":
        return z1
    if point == "z2":
        return z2
    raise PreconditionViolation(f"residues are taken at z1 or z2, not {point!r}")


def local_bases(params: TrapParams, point: str, order: int) -> Tuple[LocalPair, LocalPair]:
    """Wronskian-normalized pairs (ξ₁₁⁽¹⁾, ξ₁₁⁽²⁾) and (ξ₁₂⁽¹⁾, ξ₁₂⁽²⁾) at z₁ or z₂."""
    location = point_location(params, point)
    normal = normalized_local_pair(build_nve(params).local_data(location, order), order)
    tangential = normalized_local_pair(build_tangential_ve(params).local_data(location, order), order)
    return normal, tangential


def _source_series(terms: Tuple[SourceTerm, ...], location: QuadExt, order: int,
                   solutions: Dict[str, FrobeniusSeries]) -> FrobeniusSeries:
    total = None
    for term in terms:
        coefficient = term.coefficient.laurent_at(location, order)
        product = series_mul(coefficient, *(solutions[name] for name in term.factors))
        total = product if total is None else series_add(total, product)
    return total


def _component_residues(params: TrapParams, point: str, order: int) -> PointResidues:
    location = point_location(params, point)
    normal, tangential = local_bases(params, point, order)
    solutions = {"xi11": normal.second, "xi12": tangential.second}
    first_sources, second_sources = source_terms(params)
    k21 = _source_series(first_sources, location, order, solutions)
    k22 = _source_series(second_sources, location, order, solutions)
    components = (
        residue_at(-series_mul(normal.second, k21), location),
        residue_at(series_mul(normal.first, k21), location),
        residue_at(-series_mul(tangential.second, k22), location),
        residue_at(series_mul(tangential.first, k22), location),
    )
    displayed = residue_at(series_mul(k21, normal.second), location)
    index = 1 if point == "z1" else 2
    return PointResidues(point, location, components, displayed, closed_form_residue(params, index), order)


def ve2_residues(params: TrapParams, point: str, order: int = DEFAULT_TRUNCATION_ORDER,
                 max_order: int = MAX_TRUNCATION_ORDER) -> PointResidues:
    """
    Exact residues of (−ξ₁₁⁽²⁾K₂⁽¹⁾, ξ₁₁⁽¹⁾K₂⁽¹⁾, −ξ₁₂⁽²⁾K₂⁽²⁾, ξ₁₂⁽¹⁾K₂⁽²⁾) at z₁ or z₂.

    The truncation order doubles on InsufficientTruncation until max_order.

    Raises:
        DegenerateBranch: Outside the generic branch
        InsufficientTruncation: When max_order is not enough
    """
    while True:
        try:
            return _component_residues(params, point, order)
        except InsufficientTruncation:
            if order * 2 > max_order:
                raise
            logger.info("truncation order %d insufficient at %s, doubling", order, point)
            order *= 2


def closed_form_residue(params: TrapParams, i: int) -> QuadExt:
    """
    The printed closed form ((p²−1)/4·z_i + D/E) / (z_i²(z₁ − z₂)), evaluated directly.

    Raises:
        DegenerateBranch: Outside the generic branch
    """
    z1, z2, _ = generic_roots(params)
    if i not in (1, 2):
        raise PreconditionViolation("closed form is printed for i = 1 or 2")
    zi = z1 if i == 1 else z2
    numerator = (p_squared(params) - 1) / 4 * zi + params.D / params.E
    return numerator / (zi ** 2 * (z1 - z2))


def displayed_product_residue(params: TrapParams, point: str,
                              order: int = DEFAULT_TRUNCATION_ORDER) -> QuadExt:
    """Res K̃₂⁽¹⁾·ξ₁₁⁽²⁾·ξ₁₂⁽²⁾·ξ₁₁⁽²⁾ at z₁ or z₂."""
    return ve2_residues(params, point, order).displayed_product


def printed_coefficient_checks(params: TrapParams, order: int = 4) -> List[CoefficientCheck]:
    """First Frobenius coefficients at z₁ against their printed closed forms."""
    z1, z2, _ = generic_roots(params)
    E, D = params.E, params.D
    p2, q2 = p_squared(params), q_squared(params)
    normal, tangential = local_bases(params, "z1", order)

    def ratio(series: FrobeniusSeries) -> QuadExt:
        return series.coefficients[1] / series.coefficients[0]

    printed = {
        "xi11_1": ((p2 - 4) * z1 + (4 * q2 + 2) * z2 + 4 * D / E) / (6 * z1 * (z1 - z2)),
        "xi11_2": ((p2 - 1) * z1 + 4 * q2 * z2 + 4 * D / E) / (2 * z1 * (z1 - z2)),
        "xi12_1": (3 * z1 - 2 * z2) / (2 * z1 * (z1 - z2)),
        "xi12_2": (6 * z1 - 4 * z2) / (z1 * (z1 - z2)),
    }
    computed = {
        "xi11_1": ratio(normal.first),
        "xi11_2": ratio(normal.second),
        "xi12_1": ratio(tangential.first),
        "xi12_2": ratio(tangential.second),
    }
    return [CoefficientCheck(name, printed[name], computed[name]) for name in printed]


def ve2_sources(params: TrapParams, order: int = DEFAULT_TRUNCATION_ORDER,
                max_order: int = MAX_TRUNCATION_ORDER) -> Ve2Data:
    """
    Sources, Wronskian constants and component residues at z₁ and z₂.

    Printed-versus-computed differences are logged and collected in
    ``discrepancies``.

    Raises:
        DegenerateBranch: Outside the generic branch
    """
    first_sources, second_sources = source_terms(params)
    constants: Dict[str, Dict[str, QuadExt]] = {}
    residues: Dict[str, PointResidues] = {}
    discrepancies: List[str] = []
    for point in POINTS:
        normal, tangential = local_bases(params, point, 2)
        constants[point] = {"c1": normal.first_constant, "c2": normal.second_constant,
                            "l1": tangential.first_constant, "l2": tangential.second_constant}
        result = ve2_residues(params, point, order, max_order)
        residues[point] = result
        if result.displayed_product != result.closed_form:
            message = (f"residue of the displayed product at {point} is {result.displayed_product}, "
                       f"printed closed form gives {result.closed_form}")
            logger.warning(message)
            discrepancies.append(message)
        if result.displayed_product.is_zero and result.any_nonzero:
            message = (f"displayed product vanishes at {point} but the component residues are "
                       f"({', '.join(str(c) for c in result.components)})")
            logger.warning(message)
            discrepancies.append(message)

    checks = tuple(printed_coefficient_checks(params))
    for check in checks:
        if not check.agrees:
            message = (f"first coefficient of {check.name} at z1: recurrence {check.computed}, "
                       f"printed {check.printed}")
            logger.warning(message)
            discrepancies.append(message)

    return Ve2Data(first_sources, second_sources, constants, residues, checks, tuple(discrepancies))
