"""
Trap Hamiltonian parameters and the quantities derived from them.

H = (p_r² + p_z²)/2 + A r² + B z² + C z³ + D r² z + E z⁴ + F r² z² + G r⁴
"""

from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from exactnum import (
    QuadExt,
    SqrtClass,
    as_rational,
    format_rational,
    format_sqrt_class,
    parse_rational,
    sqrt_classify,
)
from utils.errors import DegenerateBranch, ParseError
from utils.logger import get_logger

logger = get_logger(__name__)

PARAMETER_NAMES = ("A", "B", "C", "D", "E", "F", "G")


@dataclass(frozen=True)
class TrapParams:
    """Coefficients A … G of the potential and the energy constant h."""

    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    E: Fraction
    F: Fraction
    G: Fraction
    h: Fraction = Fraction(0)

    def __post_init__(self):
        for item in fields(self):
            object.__setattr__(self, item.name, as_rational(getattr(self, item.name)))

    @classmethod
    def from_strings(cls, values: Mapping[str, str]) -> "TrapParams":
        """
        Parse parameters given in rational syntax.

        Raises:
            ParseError: Naming the offending parameter
        """
        parsed: Dict[str, Fraction] = {}
        for name in PARAMETER_NAMES:
            if name not in values or values[name] in (None, ""):
                raise ParseError(f"missing parameter {name}", flag=name)
            parsed[name] = parse_rational(str(values[name]).strip(), flag=name)
        h = values.get("h")
        parsed["h"] = parse_rational(str(h).strip(), flag="h") if h not in (None, "") else Fraction(0)
        return cls(**parsed)

    def with_changes(self, **changes) -> "TrapParams":
        values = {item.name: getattr(self, item.name) for item in fields(self)}
        values.update(changes)
        return TrapParams(**values)

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return tuple(getattr(self, name) for name in PARAMETER_NAMES)

    def to_dict(self) -> Dict[str, str]:
        return {item.name: format_rational(getattr(self, item.name)) for item in fields(self)}


@dataclass(frozen=True)
class DerivedQuantities:
    """
    q, p, the roots z₁, z₂ of Ez² + Cz + B and the partial-fraction data of b(z).

    ``alpha`` follows the printed formula D/B + AC/B²; ``alpha_decomposed``
    is the z⁻¹ coefficient of b(z) found by direct decomposition.
    """

    q: SqrtClass
    p: SqrtClass
    radicand: Fraction
    z1: QuadExt
    z2: QuadExt
    alpha: QuadExt
    beta: QuadExt
    gamma: QuadExt
    alpha_decomposed: QuadExt
    a0: Fraction
    b0: Fraction
    a_inf: Fraction
    b_inf: Fraction
    discrepancies: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "q": format_sqrt_class(self.q),
            "p": format_sqrt_class(self.p),
            "radicand": format_rational(self.radicand),
            "z1": str(self.z1),
            "z2": str(self.z2),
            "alpha": str(self.alpha),
            "alpha_decomposed": str(self.alpha_decomposed),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "a0": format_rational(self.a0),
            "b0": format_rational(self.b0),
            "a_inf": format_rational(self.a_inf),
            "b_inf": format_rational(self.b_inf),
        }


def q_squared(params: TrapParams) -> Fraction:
    return params.A / params.B


def p_squared(params: TrapParams) -> Fraction:
    return 1 + 4 * params.F / params.E


def generic_roots(params: TrapParams) -> Tuple[QuadExt, QuadExt, Fraction]:
    """
    z₁,₂ = (−C ± √(C² − 4BE)) / (2E).

    Raises:
        DegenerateBranch: For B = 0, E = 0 or a double root
    """
    if params.B == 0:
        raise DegenerateBranch("B=0")
    if params.E == 0:
        raise DegenerateBranch("E=0")
    radicand = params.C ** 2 - 4 * params.B * params.E
    if radicand == 0:
        raise DegenerateBranch("C^2=4BE")
    root = QuadExt.sqrt(radicand)
    z1 = (root - params.C) / (2 * params.E)
    z2 = (-root - params.C) / (2 * params.E)
    return z1, z2, radicand


def derive(params: TrapParams) -> DerivedQuantities:
    """
    All derived quantities of the generic branch, exactly.

    Raises:
        DegenerateBranch: Naming the special case the classifier must route to
    """
    z1, z2, radicand = generic_roots(params)
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F

    alpha = QuadExt(D / B + A * C / B ** 2)
    alpha_decomposed = QuadExt(A * C / B ** 2 - D / B)
    beta = -(F * z1 ** 2 + D * z1 + A) / (E * z1 ** 2 * (z1 - z2))
    gamma = (F * z2 ** 2 + D * z2 + A) / (E * z2 ** 2 * (z1 - z2))

    discrepancies = []
    if alpha != alpha_decomposed:
        message = (f"printed alpha = D/B + AC/B^2 = {alpha} differs from the decomposed "
                   f"z^-1 coefficient of b(z) = {alpha_decomposed}")
        logger.warning(message)
        discrepancies.append(message)

    return DerivedQuantities(
        q=sqrt_classify(q_squared(params)),
        p=sqrt_classify(p_squared(params)),
        radicand=radicand,
        z1=z1,
        z2=z2,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        alpha_decomposed=alpha_decomposed,
        a0=Fraction(1),
        b0=-q_squared(params),
        a_inf=Fraction(2),
        b_inf=(1 - p_squared(params)) / 4,
        discrepancies=tuple(discrepancies),
    )
