"""
Lamé branch E = F = 0.

Along r = p_r = 0 the orbit ż² = −2Cz³ − 2Bz² + h is
z(t) = −2(℘(t) + B/6)/C with g₂ = B²/3 and g₃ = B³/27 − C²h/4, and the
first variational equations become

    ξ̈₁₁ = (N℘ + BN/6 − 2A)·ξ₁₁,   N = 4D/C = n(n+1)
    ξ̈₁₂ = 12℘·ξ₁₂

so ξ₁₂ is proportional to ℘′ = −Cż/2.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from exactnum import QuadExt, format_rational
from fuchsian import FrobeniusSeries, LocalData, LocalPair, normalized_local_pair, residue_at, series_mul
from utils.errors import BranchMismatch, EllipticDegenerate, InsufficientTruncation, PreconditionViolation
from utils.logger import get_logger
from .params import TrapParams
from .second_order import CoefficientCheck, MAX_TRUNCATION_ORDER
from .weierstrass import weierstrass_series

logger = get_logger(__name__)

LAME_TRUNCATION_ORDER = 12


@dataclass(frozen=True)
class PAlphaCoefficients:
    """P(α, h) = (a₁ + ha₂)α³ + (b₁ + hb₂)α² + (c₁ + hc₂)α + (d₁ + hd₂)."""

    a1: Fraction
    a2: Fraction
    b1: Fraction
    b2: Fraction
    c1: Fraction
    c2: Fraction
    d1: Fraction
    d2: Fraction

    def to_dict(self) -> dict:
        return {name: format_rational(getattr(self, name))
                for name in ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2")}


@dataclass(frozen=True)
class LameData:
    """
    Lamé reduction data.

    ``g2``/``g3`` are the printed invariants; ``g2_orbit``/``g3_orbit`` come
    from substituting z(t) into the energy relation and drive the series.
    """

    N: Fraction
    n: QuadExt
    h: Fraction
    g2: Fraction
    g3: Fraction
    g2_orbit: Fraction
    g3_orbit: Fraction
    shift: Fraction
    printed_shift: Fraction
    palpha: PAlphaCoefficients
    wp_series: FrobeniusSeries
    discrepancies: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def discriminant(self) -> Fraction:
        return self.g2 ** 3 - 27 * self.g3 ** 2

    @property
    def orbit_discriminant(self) -> Fraction:
        return self.g2_orbit ** 3 - 27 * self.g3_orbit ** 2

    @property
    def integer_n(self) -> Optional[int]:
        if self.n.is_rational and self.n.to_rational().denominator == 1:
            return int(self.n.to_rational())
        return None

    def to_dict(self) -> dict:
        return {
            "N": format_rational(self.N),
            "n": str(self.n),
            "h": format_rational(self.h),
            "g2": format_rational(self.g2),
            "g3": format_rational(self.g3),
            "g2_orbit": format_rational(self.g2_orbit),
            "g3_orbit": format_rational(self.g3_orbit),
            "discriminant": format_rational(self.discriminant),
            "shift": format_rational(self.shift),
            "printed_shift": format_rational(self.printed_shift),
            "palpha": self.palpha.to_dict(),
            "wp_series": self.wp_series.to_dict(),
        }


def _check_branch(params: TrapParams):
    if params.E != 0 or params.F != 0:
        raise BranchMismatch("Lamé reduction needs E = F = 0")
    if params.C == 0 or params.B == 0:
        raise BranchMismatch("Lamé reduction needs B != 0 and C != 0")
    if params.D == 0:
        raise BranchMismatch("Lamé reduction needs D != 0 (n(n+1) = 0 separates the potential)")


def palpha_coefficients(params: TrapParams) -> PAlphaCoefficients:
    """Coefficients of P(α, h) for α(t) = n(n+1)℘ + Bn(n+1)/4 − 2A."""
    A, B, C = params.A, params.B, params.C
    N = 4 * params.D / C
    zero = Fraction(0)
    return PAlphaCoefficients(
        a1=4 / N,
        a2=zero,
        b1=-3 * B + 6 * A / N,
        b2=zero,
        c1=Fraction(11, 36) * N * B ** 2 + 3 * A ** 2 / N - 3 * A * B,
        c2=zero,
        d1=(A ** 3 / (2 * N) + Fraction(5, 48) * N ** 2 * B ** 3
            - Fraction(3, 4) * A ** 2 * B + Fraction(11, 72) * N * B ** 2 * A),
        d2=C ** 2 / 4,
    )


def lame_reduce(params: TrapParams, h=None, order: int = LAME_TRUNCATION_ORDER) -> LameData:
    """
    Exact Lamé data at energy h (defaults to params.h).

    Raises:
        BranchMismatch: Outside E = F = 0, B, C, D != 0
        EllipticDegenerate: When the printed g₂³ − 27g₃² vanishes
    """
    _check_branch(params)
    h = params.h if h is None else Fraction(h)
    A, B, C, D = params.A, params.B, params.C, params.D
    N = 4 * D / C
    n = (QuadExt.sqrt(1 + 4 * N) - 1) / 2

    g2 = 4 * B ** 2 / 9
    g3 = -B ** 3 / 18 - C ** 2 * h / 4
    if g2 ** 3 - 27 * g3 ** 2 == 0:
        raise EllipticDegenerate(f"g2^3 - 27 g3^2 = 0 at h = {format_rational(h)}")
    g2_orbit = B ** 2 / 3
    g3_orbit = B ** 3 / 27 - C ** 2 * h / 4

    shift = B * N / 6 - 2 * A
    printed_shift = B * D / C - 2 * A
    discrepancies: List[str] = []
    if shift != printed_shift:
        message = (f"Lamé shift from the orbit is BN/6 - 2A = {format_rational(shift)}, "
                   f"printed BD/C - 2A = {format_rational(printed_shift)}")
        logger.warning(message)
        discrepancies.append(message)
    if (g2, g3) != (g2_orbit, g3_orbit):
        discrepancies.append(
            f"printed invariants (g2, g3) = ({format_rational(g2)}, {format_rational(g3)}), "
            f"orbit gives ({format_rational(g2_orbit)}, {format_rational(g3_orbit)})")
        logger.info(discrepancies[-1])

    return LameData(
        N=N, n=n, h=h, g2=g2, g3=g3, g2_orbit=g2_orbit, g3_orbit=g3_orbit,
        shift=shift, printed_shift=printed_shift, palpha=palpha_coefficients(params),
        wp_series=weierstrass_series(g2_orbit, g3_orbit, max(order, 4)),
        discrepancies=tuple(discrepancies),
    )


def _lame_local(wp: FrobeniusSeries, multiplier, constant, order: int) -> LocalData:
    """t²·b for ξ̈ − (multiplier·℘ + constant)ξ = 0 at t = 0."""
    q = []
    for j in range(order):
        value = -multiplier * wp.coefficient(j - 2)
        if j == 2:
            value = value - constant
        q.append(value)
    return LocalData(QuadExt(0), tuple(QuadExt(0) for _ in range(order)), tuple(q))


def lame_local_bases(params: TrapParams, order: int = LAME_TRUNCATION_ORDER) -> Tuple[LocalPair, LocalPair]:
    """
    Wronskian-normalized pairs for ξ₁₁ and ξ₁₂ in t at t = 0.

    Raises:
        PreconditionViolation: When n(n+1) = 4D/C gives irrational exponents
        ResonantCase: When the t-recurrence meets a logarithmic obstruction
    """
    _check_branch(params)
    wp = weierstrass_series(params.B ** 2 / 3, params.B ** 3 / 27 - params.C ** 2 * params.h / 4, max(order, 4))
    N = 4 * params.D / params.C
    normal = normalized_local_pair(_lame_local(wp, N, N * params.B / 6 - 2 * params.A, order), order,
                                   allow_free_resonance=True)
    tangential = normalized_local_pair(_lame_local(wp, 12, 0, order), order, allow_free_resonance=True)
    return normal, tangential


def lame_residue(params: TrapParams, order: int = LAME_TRUNCATION_ORDER,
                 max_order: int = MAX_TRUNCATION_ORDER) -> QuadExt:
    """
    Residue at t = 0 of D·ξ₁₁⁽²⁾ξ₁₂⁽²⁾ξ₁₁⁽²⁾ for n = 3.

    The local exponents are 4 and −3; both t-recurrences pass the
    resonance at 7 because ℘ is even.

    Raises:
        PreconditionViolation: Unless D = 3C
        ResonantCase: When VE₁ itself carries a logarithm
    """
    _check_branch(params)
    if params.D != 3 * params.C:
        raise PreconditionViolation("lame_residue is defined for D = 3C (n = 3)")
    while True:
        try:
            normal, tangential = lame_local_bases(params, order)
            product = series_mul(normal.second, tangential.second, normal.second).scale(params.D)
            return residue_at(product, QuadExt(0))
        except InsufficientTruncation:
            if order * 2 > max_order:
                raise
            order *= 2


def printed_lame_residue(params: TrapParams) -> QuadExt:
    """The printed quartic D(A⁴/900 − 8A³B/1125 + 97A²B²/6750 − 34AB³/3375 + 23B⁴/13500)."""
    A, B = params.A, params.B
    quartic = (A ** 4 / 900 - Fraction(8, 1125) * A ** 3 * B + Fraction(97, 6750) * A ** 2 * B ** 2
               - Fraction(34, 3375) * A * B ** 3 + Fraction(23, 13500) * B ** 4)
    return QuadExt(params.D * quartic)


def lame_coefficient_checks(params: TrapParams) -> List[CoefficientCheck]:
    """Printed t⁻¹ and t¹ coefficients of ξ₁₁⁽²⁾ and ξ₁₂⁽²⁾ against the recurrence (n = 3)."""
    A, B = params.A, params.B
    normal, tangential = lame_local_bases(params, 6)
    printed = {
        "xi11_2[t^-1]": ((A - B) / 5, normal.second.coefficient(-1)),
        "xi11_2[t^1]": ((3 * A ** 2 - 6 * B * A + B ** 2) / 90, normal.second.coefficient(1)),
        "xi12_2[t^-1]": (-B / 5, tangential.second.coefficient(-1)),
        "xi12_2[t^1]": (B ** 2 / 90, tangential.second.coefficient(1)),
    }
    checks = [CoefficientCheck(name, QuadExt(value), computed) for name, (value, computed) in printed.items()]
    for check in checks:
        if not check.agrees:
            logger.warning("Lamé coefficient %s: recurrence %s, printed %s", check.name, check.computed, check.printed)
    return checks
