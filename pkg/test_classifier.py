"""
Tests for the classifier: the decision tree on the regression fixtures,
the individual rules, the quartic screening and certificate replay.
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from classifier import (
    Certificate,
    Verdict,
    VerdictTag,
    abelian_candidate,
    case_b_test,
    classify,
    disjunctive_case_b,
    homogeneous_checks,
    literal_abelian_union,
    signed_sums,
    thA_check,
    vmax_screen,
)
from classifier import decision_tree
from exactnum import QuadExt, RationalValue
from utils.errors import EllipticDegenerate, PreconditionViolation
from ve import PAlphaCoefficients, TrapParams, derive


def trap(A, B, C, D, E, F, G=0, h=0):
    return TrapParams(*(Fraction(v) for v in (A, B, C, D, E, F, G)), h=Fraction(h))


def palpha(a1, b1=0, c1=0, d1=0, a2=0, b2=0, c2=0, d2=0):
    return PAlphaCoefficients(*(Fraction(v) for v in (a1, a2, b1, b2, c1, c2, d1, d2)))


def verdict_of(*values):
    return classify(trap(*values))[0].tag


REGRESSION_CASES = [
    ((1, 1, 1, 3, 1, 6), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((2, 1, 1, 1, 1, 1), VerdictTag.NO_ANALYTIC_INTEGRAL),
    ((1, 64, 1, 1, 25, -6), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((1, 2, 3, 0, 1, 0), VerdictTag.INTEGRABLE_SEPARABLE),
    ((0, 0, 1, 1, 0, 0), VerdictTag.INTEGRABLE_EXPLICIT),
    ((1, 0, 1, 1, 1, 1), VerdictTag.UNDECIDED),
    ((1, 2, 1, 3, 0, 0), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((2, 2, 1, 3, 0, 0), VerdictTag.CANDIDATE_INTEGRABLE),
    ((1, 1, 4, 5, 0, 0), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((2, 1, 0, 0, 0, 3), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((-1, 4, 0, 0, 0, 1), VerdictTag.CANDIDATE_INTEGRABLE),
    ((1, 1, 2, 1, 1, 1), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((2, 1, 2, 1, 1, 2), VerdictTag.CANDIDATE_INTEGRABLE),
    ((0, 1, 1, 1, 1, 1), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((0, 1, 1, 2, 1, 1), VerdictTag.CANDIDATE_INTEGRABLE),
    ((1, 1, 1, 1, 0, 1), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((0, 0, 1, 1, 1, 1), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((0, 0, 0, 1, 1, 1), VerdictTag.UNDECIDED),
    ((0, 0, 4, 3, 1, 0), VerdictTag.NON_INTEGRABLE_MEROMORPHIC),
    ((1, 1, 3, 0, 1, 6), VerdictTag.CANDIDATE_INTEGRABLE),
]


class TestDecisionTree:
    @pytest.mark.parametrize("values,expected", REGRESSION_CASES)
    def test_regression_cases(self, values, expected):
        assert verdict_of(*values) == expected

    @pytest.mark.parametrize("values,expected", REGRESSION_CASES)
    def test_certificate_replays_to_verdict(self, values, expected):
        verdict, certificate = classify(trap(*values))
        assert certificate.replay() == verdict
        restored = Certificate.from_dict(certificate.to_dict())
        assert restored.replay() == verdict

    def test_generic_case_c_trail(self):
        verdict, certificate = classify(trap(1, 1, 1, 3, 1, 6))
        rules = [finding.rule for finding in certificate.findings]
        assert rules == ["separable", "explicit", "generic.a", "generic.b", "generic.c", "ve2.residues"]
        assert {"derived", "ve2", "vmax"} <= set(certificate.attachments)
        assert certificate.attachments["derived"]["p"] == "5"

    def test_branching_case_records_q(self):
        _, certificate = classify(trap(2, 1, 1, 1, 1, 1))
        finding = certificate.findings[-1]
        assert finding.rule == "generic.a"
        assert finding.values["q"] == "sqrt(2)"

    def test_candidate_carries_necessary_conditions(self):
        verdict, _ = classify(trap(1, 1, 3, 0, 1, 6))
        assert verdict.necessary_conditions[0] == "D=0 or C=0 or p^2=1"

    def test_lame_n_three(self):
        verdict, certificate = classify(trap(1, 2, 1, 3, 0, 0))
        assert verdict.tag == VerdictTag.NON_INTEGRABLE_MEROMORPHIC
        assert "lame" in certificate.attachments
        assert any(f.rule == "lame.n3" for f in certificate.findings)
        assert any("witness vanishes" in warning for warning in certificate.warnings)

    def test_lame_equal_a_b(self):
        verdict, _ = classify(trap(2, 2, 1, 3, 0, 0))
        assert verdict.necessary_conditions == ("E=F=0, D=3C, A=B",)

    def test_lame_without_c(self):
        verdict = decision_tree.lame_branch(trap(1, 1, 0, 1, 0, 0))
        assert verdict.tag == VerdictTag.UNDECIDED

    def test_zero_b_reason(self):
        verdict, _ = classify(trap(1, 0, 1, 1, 1, 1))
        assert "B=0" in verdict.reason

    def test_absorbed_error_becomes_undecided(self, monkeypatch):
        def degenerate(params, h=None):
            raise EllipticDegenerate("g2^3 - 27 g3^2 = 0")

        monkeypatch.setattr(decision_tree, "lame_reduce", degenerate)
        verdict, certificate = classify(trap(1, 2, 1, 3, 0, 0))
        assert verdict.tag == VerdictTag.UNDECIDED
        assert verdict.reason.startswith("EllipticDegenerate")
        assert certificate.findings[-1].rule == "absorbed_error"
        assert certificate.replay() == verdict

    def test_meromorphic_obstruction_has_rational_exponents(self):
        rng = random.Random(7)
        checked = 0
        while checked < 10:
            B = Fraction(rng.randint(1, 4))
            E = Fraction(rng.choice([-1, 1]) * rng.randint(1, 3))
            C = Fraction(rng.randint(1, 4))
            if C * C == 4 * B * E:
                continue
            q = Fraction(rng.randint(1, 6), rng.randint(1, 6))
            p = Fraction(rng.randint(1, 6), rng.randint(1, 6))
            params = trap(q * q * B, B, C, rng.randint(1, 3), E, (p * p - 1) * E / 4)
            verdict, _ = classify(params)
            if verdict.tag == VerdictTag.NON_INTEGRABLE_MEROMORPHIC:
                derived = derive(params)
                assert isinstance(derived.q, RationalValue)
                assert isinstance(derived.p, RationalValue)
            checked += 1


class TestCaseB:
    def test_fixture_pairs(self):
        assert case_b_test(Fraction(1, 8), Fraction(1, 5))
        assert not case_b_test(1, 5)

    def test_partition(self):
        for k in range(1, 13):
            for j in range(1, 13):
                q, p = Fraction(k, 7), Fraction(j, 5)
                assert abelian_candidate(q, p) != case_b_test(q, p)

    def test_five_five_excluded(self):
        assert not case_b_test(Fraction(1, 10), Fraction(2, 5))
        assert literal_abelian_union(Fraction(1, 10), Fraction(2, 5))

    def test_disjunctive_reading_differs(self):
        q, p = Fraction(1, 4), Fraction(1, 3)
        assert disjunctive_case_b(q, p)
        assert not case_b_test(q, p)

    def test_integer_combination(self):
        assert not case_b_test(Fraction(3, 8), Fraction(1, 4))


class TestRules:
    def test_signed_sums(self):
        root = QuadExt.sqrt(2)
        sums = dict(signed_sums(root, root))
        assert sums["+x+y"] is None
        assert sums["+x-y"] == 0
        assert sums["-x+y"] == 0
        assert sums["-x-y"] is None

    def test_homogeneous_none(self):
        certificate = Certificate()
        verdict = homogeneous_checks(trap(1, 1, 1, 1, 1, 1), certificate)
        assert verdict.tag == VerdictTag.UNDECIDED
        assert certificate.findings[0].rule == "homogeneous.none"

    def test_a_b_zero_sub_cases(self):
        _, certificate = classify(trap(0, 0, 1, 1, 1, 1))
        assert certificate.findings[-1].rule == "ab_zero.a"
        _, certificate = classify(trap(0, 0, 4, 3, 1, 0))
        assert certificate.findings[-1].rule == "ab_zero.b3"

    def test_e_zero_disjunction(self):
        _, certificate = classify(trap(1, 1, 1, 1, 0, 1))
        finding = certificate.findings[-1]
        assert finding.rule == "e_zero"
        assert finding.values["2F-C"] == "1"


class TestLameConditions:
    def test_condition_one(self):
        result = thA_check(palpha(Fraction(1, 3)))
        assert result.condition == "1"
        assert result.n == 3
        assert str(result) == "condition1(n=3)"

    def test_condition_two_one(self):
        result = thA_check(palpha(Fraction(16, 3)))
        assert result.condition == "2.1"
        assert result.m == 1

    def test_condition_two_two(self):
        result = thA_check(palpha(Fraction(16, 15), b1=4, c1=Fraction(-45, 16)))
        assert result.condition == "2.2"
        assert result.m == 2

    def test_condition_two_two_side_condition(self):
        assert not thA_check(palpha(Fraction(16, 15), b1=4, c1=1)).holds

    def test_condition_three(self):
        result = thA_check(palpha(Fraction(144, 55)))
        assert result.condition == "3"
        assert result.n == Fraction(5, 6)

    def test_none(self):
        assert not thA_check(palpha(1)).holds
        assert not thA_check(palpha(Fraction(1, 3), a2=1)).holds


class TestQuarticScreen:
    def test_exact_and_scaled_patterns(self):
        exact = vmax_screen(trap(1, 1, 0, 0, Fraction(1, 4), 3, G=4))
        assert [(m.case, m.convention) for m in exact] == [("V5a", "exact")]
        scaled = vmax_screen(trap(1, 1, 0, 0, Fraction(1, 2), 6, G=8))
        assert [(m.case, m.convention) for m in scaled] == [("V5a", "ratio")]
        assert [m.case for m in vmax_screen(trap(1, 1, 0, 0, 2, Fraction(3, 2), G=Fraction(1, 4)))] == ["V6b"]

    def test_flagged_pattern(self):
        matches = {m.case: m for m in vmax_screen(trap(1, 1, 0, 0, 1, 0))}
        assert set(matches) == {"V1b", "V4"}
        assert matches["V4"].flagged

    def test_no_match(self):
        assert vmax_screen(trap(1, 1, 1, 3, 1, 6)) == []


class TestVerdicts:
    def test_round_trip(self):
        verdict = Verdict.candidate(["C = 0"])
        assert Verdict.from_dict(verdict.to_dict()) == verdict
        assert str(VerdictTag.UNDECIDED) == "Undecided"
        assert "reason" not in verdict.to_dict()

    def test_replay_without_decision(self):
        certificate = Certificate()
        certificate.record("gate", "-", {}, True)
        with pytest.raises(PreconditionViolation):
            certificate.replay()

    def test_warnings_are_unique(self):
        certificate = Certificate()
        certificate.extend_warnings(["a", "a", "b"])
        assert certificate.warnings == ["a", "b"]
