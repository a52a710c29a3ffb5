"""
The decision tree: gates in a fixed order, each recorded as a Finding.

    1. F = D = 0                    separable
    2. A = B = F = E = 0            explicit solutions
    3. E = F = 0                    Lamé branch
    4. E = 0, F ≠ 0, C = 0          Whittaker branch
    5. E = 0, F ≠ 0, C ≠ 0          E = 0 proposition
    6. A = B = 0                    A = B = 0 proposition
    7. A = 0, B ≠ 0                 2FC ≠ DE
    8. B = 0, A ≠ 0                 undecided
    9. C² = 4BE                     confluent Heun branch
   10. generic                      branching, trace and residue cases a, b, c
"""

from typing import Optional, Tuple

from exactnum import RationalValue, format_rational, format_sqrt_class
from utils.errors import AuditError
from utils.logger import get_logger
from ve import (
    COMPONENTS,
    TrapParams,
    confluent_heun_reduce,
    derive,
    lame_coefficient_checks,
    lame_reduce,
    lame_residue,
    p_squared,
    printed_lame_residue,
    ve2_sources,
    whittaker_reduce,
)
from .rules import (
    case_b_test,
    confluent_heun_check,
    disjunctive_case_b,
    homogeneous_checks,
    literal_abelian_union,
    screen_conditions,
    thA_check,
    vmax_screen,
    whittaker_check,
)
from .verdicts import Certificate, Verdict

logger = get_logger(__name__)


def lame_branch(params: TrapParams, certificate: Optional[Certificate] = None) -> Verdict:
    """
    E = F = 0.

    No Lamé condition → NonIntegrableMeromorphic. For n = 3 (D = 3C) the
    verdict follows the n = 3 proposition (A ≠ B) with the t = 0 residue recorded as
    the witness; any other passing condition → CandidateIntegrable.

    Raises:
        EllipticDegenerate: When the elliptic reduction degenerates at h
    """
    certificate = certificate if certificate is not None else Certificate()
    if params.C == 0 or params.B == 0:
        verdict = Verdict.undecided("E=F=0 with B=0 or C=0: no Lamé reduction")
        certificate.record("lame.degenerate", "Lamé branch, E=F=0",
                           {"B": format_rational(params.B), "C": format_rational(params.C)}, True, verdict)
        return verdict

    data = lame_reduce(params)
    certificate.attachments["lame"] = data.to_dict()
    certificate.extend_warnings(data.discrepancies)

    result = thA_check(data)
    certificate.record("lame.conditions", "Lamé necessary conditions", dict(data.palpha.to_dict(), condition=str(result)),
                       not result.holds, Verdict.non_integrable())
    if not result.holds:
        return Verdict.non_integrable()

    if params.D == 3 * params.C:
        residue = lame_residue(params)
        printed = printed_lame_residue(params)
        certificate.record("lame.residue", "residue at t=0 of D xi11 xi12 xi11",
                           {"residue": residue, "printed": printed}, not residue.is_zero)
        if residue != printed:
            certificate.warn(f"Lamé residue from the series engine is {residue}, printed quartic gives {printed}")
        for check in lame_coefficient_checks(params):
            if not check.agrees:
                certificate.warn(f"Lamé coefficient {check.name}: recurrence {check.computed}, printed {check.printed}")

        holds = params.A != params.B
        verdict = Verdict.non_integrable() if holds else Verdict.candidate(["E=F=0, D=3C, A=B"])
        certificate.record("lame.n3", "Lamé n=3 proposition, E=F=0, D=3C",
                           {"A": format_rational(params.A), "B": format_rational(params.B)}, True, verdict)
        if holds and residue.is_zero:
            certificate.warn("computed Lamé witness vanishes; verdict follows the A != B test of the n = 3 proposition")
        return verdict

    verdict = Verdict.candidate([f"Lamé: {result}"])
    certificate.record("lame.open", "Lamé necessary conditions", {"condition": str(result)}, True, verdict)
    return verdict


def _generic(params: TrapParams, certificate: Certificate) -> Verdict:
    derived = derive(params)
    certificate.attachments["derived"] = derived.to_dict()
    certificate.extend_warnings(derived.discrepancies)

    rational = isinstance(derived.q, RationalValue) and isinstance(derived.p, RationalValue)
    values = {"q": format_sqrt_class(derived.q), "p": format_sqrt_class(derived.p)}
    certificate.record("generic.a", "branching of the NVE exponents q, p", values, not rational,
                       Verdict.no_analytic_integral())
    if not rational:
        return Verdict.no_analytic_integral()

    q, p = abs(derived.q.value), abs(derived.p.value)
    b = case_b_test(q, p)
    certificate.record("generic.b", "trace transcendence, conjunctive denominator test",
                       dict(values, two_q=format_rational(2 * q)), b, Verdict.non_integrable())
    if disjunctive_case_b(q, p) != b:
        certificate.warn("case b read with 'or' disagrees with the conjunctive reading here; "
                         "the conjunction is followed")
    if literal_abelian_union(q, p) == b:
        certificate.warn("the printed abelian-candidate union is not the complement of case b here")
    if b:
        return Verdict.non_integrable()

    ve2 = ve2_sources(params)
    certificate.attachments["ve2"] = ve2.to_dict()
    certificate.extend_warnings(ve2.discrepancies)
    residues = {f"{point}:{name}": value
                for point, data in ve2.component_residues.items()
                for name, value in zip(COMPONENTS, data.components)}
    test = params.D != 0 and params.C != 0 and p_squared(params) != 1
    certificate.record("generic.c", "D!=0, C!=0, p^2!=1 parameter test",
                       {"D": format_rational(params.D), "C": format_rational(params.C),
                        "p^2": format_rational(p_squared(params))}, test)
    if test:
        verdict = Verdict.non_integrable()
    else:
        verdict = Verdict.candidate(["D=0 or C=0 or p^2=1"] + screen_conditions(vmax_screen(params)))
    certificate.record("ve2.residues", "residues of X^-1 f2 at z1, z2",
                       dict(residues, nonzero=ve2.any_nonzero), True, verdict)
    if test != ve2.any_nonzero:
        certificate.warn("VE2 residue witness and the D!=0, C!=0, p^2!=1 test disagree; "
                         "verdict follows the parameter test")
    return verdict


def _decide(params: TrapParams, certificate: Certificate) -> Verdict:
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F
    values = {name: format_rational(getattr(params, name)) for name in ("A", "B", "C", "D", "E", "F")}

    separable = F == 0 and D == 0
    certificate.record("separable", "the variables are separated", {"F": values["F"], "D": values["D"]},
                       separable, Verdict.separable())
    if separable:
        return Verdict.separable()

    explicit = A == 0 and B == 0 and F == 0 and E == 0
    certificate.record("explicit", "A=B=F=E=0 solved explicitly", values, explicit, Verdict.explicit())
    if explicit:
        return Verdict.explicit()

    if E == 0 and F == 0:
        certificate.record("gate.lame", "Lamé branch, E=F=0", values, True)
        return lame_branch(params, certificate)

    if E == 0 and C == 0:
        certificate.record("gate.whittaker", "Whittaker branch, C=E=0", values, True)
        data = whittaker_reduce(params)
        certificate.attachments["whittaker"] = data.to_dict()
        return whittaker_check(data, certificate)

    if (E == 0 and C != 0) or A == 0:
        certificate.record("gate.homogeneous", "degenerate propositions", values, True)
        return homogeneous_checks(params, certificate)

    if B == 0:
        verdict = Verdict.undecided("B=0, A≠0 unresolved in source analysis")
        certificate.record("b_zero", "B=0, A!=0", values, True, verdict)
        return verdict

    if C ** 2 == 4 * B * E:
        certificate.record("gate.confluent_heun", "confluent Heun branch, C^2=4BE", values, True)
        data = confluent_heun_reduce(params)
        certificate.attachments["confluent_heun"] = data.to_dict()
        return confluent_heun_check(data, certificate)

    return _generic(params, certificate)


def classify(params: TrapParams) -> Tuple[Verdict, Certificate]:
    """
    Total classification of a parameter set.

    Errors raised inside a branch (for instance EllipticDegenerate or
    InsufficientTruncation) become Undecided with the error tag as reason.
    """
    certificate = Certificate()
    try:
        verdict = _decide(params, certificate)
    except AuditError as error:
        logger.warning("classification absorbed %s: %s", error.tag, error)
        verdict = Verdict.undecided(f"{error.tag}: {error}")
        certificate.record("absorbed_error", "-", {"error": error.tag}, True, verdict)

    matches = vmax_screen(params)
    certificate.attachments["vmax"] = [match.to_dict() for match in matches]
    logger.info("classified %s as %s", params.to_dict(), verdict.tag)
    return verdict, certificate
