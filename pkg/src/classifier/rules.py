"""
Individual decision rules: the monodromy tests of the generic branch, the
degenerate-branch propositions, the Lamé necessary conditions and the
screening of the quartic part against the known integrable patterns.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from exactnum import (
    QuadExt,
    RationalValue,
    as_rational,
    berger_independent,
    denominator_N,
    format_rational,
    is_integer,
    rational_part_of_sum,
    rational_sqrt,
    sqrt_classify,
)
from utils.logger import get_logger
from ve import ConfluentHeunData, LameData, PAlphaCoefficients, TrapParams, WhittakerData
from .verdicts import Certificate, Verdict

logger = get_logger(__name__)

SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


# -- generic branch ---------------------------------------------------------

def case_b_test(q, p) -> bool:
    """
    2q ± p ∉ ℤ and N(2q) ≥ 4, N(p) ≥ 4, (N(2q), N(p)) ≠ (5, 5).

    Equivalent to t∞ = 2cos πp being transcendental over ℚ[t₀].
    """
    two_q, p = 2 * as_rational(q), as_rational(p)
    if is_integer(two_q + p) or is_integer(two_q - p):
        return False
    return berger_independent(two_q, p)


def abelian_candidate(q, p) -> bool:
    """Complement of case_b_test on rational (q, p)."""
    return not case_b_test(q, p)


def disjunctive_case_b(q, p) -> bool:
    """The disjunctive reading: 2q ± p ∉ ℤ, or the denominator conditions."""
    two_q, p = 2 * as_rational(q), as_rational(p)
    no_integer = not is_integer(two_q + p) and not is_integer(two_q - p)
    n_q, n_p = denominator_N(two_q), denominator_N(p)
    return no_integer or (n_q >= 4 and n_p >= 4 and (n_q, n_p) != (5, 5))


def literal_abelian_union(q, p) -> bool:
    """2q ± p ∈ ℤ, or N(2q) ≤ 3 and N(p) ≤ 3, or (N(2q), N(p)) = (5, 5)."""
    two_q, p = 2 * as_rational(q), as_rational(p)
    n_q, n_p = denominator_N(two_q), denominator_N(p)
    return (is_integer(two_q + p) or is_integer(two_q - p)
            or (n_q <= 3 and n_p <= 3) or (n_q, n_p) == (5, 5))


# -- signed sums -------------------------------------------------------------

def _sqrt_of(value: Fraction) -> QuadExt:
    return QuadExt.sqrt(value)


def signed_sums(x: QuadExt, y: QuadExt) -> List[Tuple[str, Optional[Fraction]]]:
    """Exact ±x ± y for the four sign pairs; None marks an irrational sum."""
    results = []
    for sx, sy in SIGNS:
        label = f"{'+' if sx > 0 else '-'}x{'+' if sy > 0 else '-'}y"
        results.append((label, rational_part_of_sum([x * sx, y * sy])))
    return results


def confluent_heun_check(data: ConfluentHeunData, certificate: Optional[Certificate] = None) -> Verdict:
    """NonIntegrableMeromorphic iff no ±β ± γ lies in 2ℤ∖{0}."""
    certificate = certificate if certificate is not None else Certificate()
    beta, gamma = _sqrt_of(data.beta_squared), _sqrt_of(data.gamma_squared)
    sums = signed_sums(beta, gamma)
    hits = [label for label, value in sums
            if value is not None and value != 0 and is_integer(value) and value.numerator % 2 == 0]
    holds = not hits
    values = {"beta": beta, "gamma": gamma, "even_nonzero_sums": ",".join(hits) or "none"}
    verdict = Verdict.non_integrable() if holds else Verdict.candidate(
        ["±sqrt(1+4F/E) ± sqrt(1+4A/B) in 2Z\\{0}"])
    certificate.record("confluent_heun", "confluent Heun reduction, C^2=4BE", values, True, verdict)
    return verdict


def whittaker_check(data: WhittakerData, certificate: Optional[Certificate] = None) -> Verdict:
    """NonIntegrableMeromorphic iff no ±κ ± μ lies in ℤ + 1/2."""
    certificate = certificate if certificate is not None else Certificate()
    mu = _sqrt_of(data.mu_squared)
    sums = signed_sums(data.kappa, mu)
    hits = [label for label, value in sums if value is not None and is_integer(value - Fraction(1, 2))]
    holds = not hits
    values = {"kappa": data.kappa, "mu": mu, "half_integer_sums": ",".join(hits) or "none"}
    verdict = Verdict.non_integrable() if holds else Verdict.candidate(["±kappa ± mu in Z+1/2"])
    certificate.record("whittaker", "Whittaker reduction, C=E=0", values, True, verdict)
    return verdict


# -- Lamé ----------------------------------------------------------------------

@dataclass(frozen=True)
class ThAResult:
    """Which necessary condition for Lamé integrability holds; ``condition`` is "none" when none does."""

    condition: str
    n: Optional[Fraction] = None
    m: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.condition != "none"

    def __str__(self):
        if self.condition == "1":
            return f"condition1(n={format_rational(self.n)})"
        if self.condition.startswith("2"):
            return f"condition2(m={self.m}, subcase {self.condition})"
        return "condition3" if self.condition == "3" else "none"


def _natural_n(a1: Fraction) -> Optional[Fraction]:
    """n ≥ 1 with a₁ = 4/(n(n+1)), if it is an integer."""
    s = _half_odd(a1)
    if s is None:
        return None
    n = s - Fraction(1, 2)
    return n if is_integer(n) and n >= 1 else None


def _half_odd(a1: Fraction) -> Optional[Fraction]:
    """s = n + 1/2 ≥ 0 with a₁ = 4/(n(n+1)), i.e. s² = 1/4 + 4/a₁, when rational."""
    root = rational_sqrt(Fraction(1, 4) + 4 / a1)
    return root


def _natural_m(a1: Fraction) -> Optional[int]:
    m_squared = (16 / a1 + 1) / 4
    m = rational_sqrt(m_squared)
    if m is None or not is_integer(m) or m < 1:
        return None
    return int(m)


def thA_check(data: Union[LameData, PAlphaCoefficients]) -> ThAResult:
    """
    Necessary integrability conditions for a Lamé-type NVE, evaluated exactly.

    Args:
        data: LameData or bare PAlphaCoefficients
    """
    c = data.palpha if isinstance(data, LameData) else data
    if c.a2 != 0 or c.a1 == 0:
        return ThAResult("none")

    n = _natural_n(c.a1)
    if n is not None:
        return ThAResult("1", n=n)

    m = _natural_m(c.a1)
    if m is not None and c.b2 == 0:
        if m == 1 and c.b1 == 0:
            return ThAResult("2.1", m=m)
        if m == 2 and c.c2 == 0 and 16 * c.a1 * c.c1 + 3 * c.b1 ** 2 == 0:
            return ThAResult("2.2", m=m)
        if (m == 3 and 16 * c.a1 * c.d2 + 11 * c.b1 * c.c2 == 0
                and 1024 * c.a1 ** 2 * c.d1 + 704 * c.a1 * c.b1 * c.c1 + 45 * c.b1 ** 3 == 0):
            return ThAResult("2.3", m=m)
        if m > 3 and c.b1 == 0:
            if m % 6 in (1, 2, 4, 5) and c.c1 == 0 and c.c2 == 0:
                return ThAResult("2.m", m=m)
            if m % 2 == 1 and c.d1 == 0 and c.d2 == 0:
                return ThAResult("2.m", m=m)

    s = _half_odd(c.a1)
    if s is not None and not is_integer(s) and any(is_integer(k * s) for k in (3, 4, 5)) and c.b2 == 0:
        first = c.c2 == 0 and c.b1 ** 2 - 3 * c.a1 * c.c1 == 0
        second = (c.c2 * c.b1 - 3 * c.a1 * c.d2 == 0
                  and 2 * c.b1 ** 3 - 9 * c.a1 * c.b1 * c.c1 + 27 * c.a1 ** 2 * c.d1 == 0)
        if first or second:
            return ThAResult("3", n=s - Fraction(1, 2))
    return ThAResult("none")


# -- homogeneous / degenerate propositions ------------------------------------

def _rational_value(value) -> Optional[Fraction]:
    return value.value if isinstance(value, RationalValue) else None


def ab_zero_check(params: TrapParams, certificate: Certificate) -> Verdict:
    """A = B = 0 with D = (P²−1)C/4 and F = (p²−1)E/4."""
    if params.C == 0:
        verdict = Verdict.undecided("A=B=0 with C=0: P is undefined")
        certificate.record("ab_zero.C", "A=B=0 proposition", {"C": 0}, True, verdict)
        return verdict
    P_squared = 1 + 4 * params.D / params.C
    p_squared = 1 + 4 * params.F / params.E
    P, p = _rational_value(sqrt_classify(P_squared)), _rational_value(sqrt_classify(p_squared))
    values = {"P^2": format_rational(P_squared), "p^2": format_rational(p_squared)}
    non_integrable = Verdict.non_integrable()

    irrational = P is None or p is None
    certificate.record("ab_zero.a", "A=B=0: P or p irrational", values, irrational, non_integrable)
    if irrational:
        return non_integrable

    some_integer = is_integer(P + p) or is_integer(P - p)
    n_P, n_p = denominator_N(P), denominator_N(p)
    values = dict(values, P=format_rational(P), p=format_rational(p), N_P=n_P, N_p=n_p)
    certificate.record("ab_zero.b1", "A=B=0: P ± p not an integer", values, not some_integer, non_integrable)
    if not some_integer:
        return non_integrable
    b21 = n_P >= 4 and n_p >= 4
    certificate.record("ab_zero.b21", "A=B=0: N(P) >= 4 and N(p) >= 4", values, b21, non_integrable)
    if b21:
        return non_integrable
    b22 = n_P == 5 and n_p == 5
    certificate.record("ab_zero.b22", "A=B=0: N(P) = N(p) = 5", values, b22, non_integrable)
    if b22:
        return non_integrable
    polynomial = 3 * P_squared * p_squared - P_squared ** 2 - 6 * p_squared - P_squared + 5
    b3 = n_P <= 3 and n_p <= 3 and params.E != 0 and polynomial != 0
    certificate.record("ab_zero.b3", "A=B=0: N(P), N(p) <= 3 with nonzero quartic", dict(values, polynomial=format_rational(polynomial)),
                       b3, non_integrable)
    if b3:
        return non_integrable
    verdict = Verdict.candidate(["A=B=0: no obstruction sub-case applies"])
    certificate.record("ab_zero.open", "A=B=0 proposition", values, True, verdict)
    return verdict


def a_zero_check(params: TrapParams, certificate: Certificate) -> Verdict:
    """A = 0, B ≠ 0: not meromorphically integrable when 2FC ≠ DE."""
    gap = 2 * params.F * params.C - params.D * params.E
    holds = gap != 0
    verdict = Verdict.non_integrable() if holds else Verdict.candidate(["A=0 and 2FC=DE"])
    certificate.record("a_zero", "A=0, B!=0 proposition", {"2FC-DE": format_rational(gap)}, True, verdict)
    return verdict


def e_zero_check(params: TrapParams, certificate: Certificate) -> Verdict:
    """E = 0, F ≠ 0: not meromorphically integrable if 2F ≠ C or 16F ≠ 3C."""
    holds = 2 * params.F != params.C or 16 * params.F != 3 * params.C
    verdict = Verdict.non_integrable() if holds else Verdict.candidate(["2F=C and 16F=3C"])
    values = {"2F-C": format_rational(2 * params.F - params.C),
              "16F-3C": format_rational(16 * params.F - 3 * params.C)}
    certificate.record("e_zero", "E=0, F!=0 proposition", values, True, verdict)
    return verdict


def homogeneous_checks(params: TrapParams, certificate: Optional[Certificate] = None) -> Verdict:
    """
    Route to the A = B = 0, A = 0 or E = 0 ∧ F ≠ 0 proposition.

    Returns Undecided when none of the three branches applies.
    """
    certificate = certificate if certificate is not None else Certificate()
    if params.E == 0 and params.F != 0 and params.C != 0:
        return e_zero_check(params, certificate)
    if params.A == 0 and params.B == 0 and params.E != 0:
        return ab_zero_check(params, certificate)
    if params.A == 0 and params.B != 0:
        return a_zero_check(params, certificate)
    verdict = Verdict.undecided("no homogeneous proposition applies")
    certificate.record("homogeneous.none", "degenerate propositions", {}, True, verdict)
    return verdict


# -- quartic screening ---------------------------------------------------------

Q_RATIONAL = "sqrt(A/B) in Q"
C_ZERO = "C = 0"
D_ZERO = "D = 0"


@dataclass(frozen=True)
class VPattern:
    name: str
    E: Optional[Fraction]
    F: Optional[Fraction]
    G: Optional[Fraction]
    conditions: Tuple[str, ...]
    flagged: bool = False


VMAX_PATTERNS = (
    VPattern("V1a", Fraction(0), Fraction(0), None, ("Lamé necessary conditions",)),
    VPattern("V1b", None, Fraction(0), Fraction(0), (Q_RATIONAL, D_ZERO)),
    VPattern("V3", Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), (Q_RATIONAL, C_ZERO, D_ZERO)),
    VPattern("V4", Fraction(1), Fraction(0), None, (Q_RATIONAL, D_ZERO), flagged=True),
    VPattern("V5a", Fraction(1, 4), Fraction(3), Fraction(4), (Q_RATIONAL, C_ZERO, D_ZERO)),
    VPattern("V5b", Fraction(4), Fraction(3), Fraction(1, 4), (Q_RATIONAL, C_ZERO, D_ZERO)),
    VPattern("V6a", Fraction(1, 4), Fraction(3, 2), Fraction(2), (Q_RATIONAL, C_ZERO, D_ZERO)),
    VPattern("V6b", Fraction(2), Fraction(3, 2), Fraction(1, 4), (Q_RATIONAL, C_ZERO, D_ZERO)),
)


@dataclass(frozen=True)
class VMatch:
    case: str
    convention: str
    conditions: Tuple[str, ...]
    flagged: bool

    def to_dict(self) -> dict:
        return {"case": self.case, "convention": self.convention,
                "conditions": list(self.conditions), "flagged": self.flagged}


def _matches_exact(pattern: VPattern, triple) -> bool:
    return all(want is None or have == want for want, have in zip((pattern.E, pattern.F, pattern.G), triple))


def _matches_ratio(pattern: VPattern, triple) -> bool:
    """(E, F, G) = λ·pattern for some λ ≠ 0, free entries ignored."""
    wants = (pattern.E, pattern.F, pattern.G)
    scale = None
    for want, have in zip(wants, triple):
        if want is None:
            continue
        if want == 0:
            if have != 0:
                return False
            continue
        ratio = have / want
        if ratio == 0 or (scale is not None and ratio != scale):
            return False
        scale = ratio
    return scale is not None


def vmax_screen(params: TrapParams) -> List[VMatch]:
    """Quartic patterns V₁ … V₆ matched by (E, F, G), exactly or up to a common scale."""
    triple = (params.E, params.F, params.G)
    matches = []
    for pattern in VMAX_PATTERNS:
        if _matches_exact(pattern, triple):
            matches.append(VMatch(pattern.name, "exact", pattern.conditions, pattern.flagged))
        elif _matches_ratio(pattern, triple):
            matches.append(VMatch(pattern.name, "ratio", pattern.conditions, pattern.flagged))
    return matches


def screen_conditions(matches: List[VMatch]) -> List[str]:
    """Flattened "Vk: condition" strings for a CandidateIntegrable verdict."""
    return [f"{match.case}: {condition}" for match in matches for condition in match.conditions]
