"""
Tests for the variational equations: derived quantities, second-order
residues, the Weierstrass series and the Lamé, Whittaker and confluent
Heun reductions.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from exactnum import IrrationalReal, QuadExt, RationalValue
from utils.errors import BranchMismatch, DegenerateBranch, ParseError, PreconditionViolation
from ve import (
    TrapParams,
    closed_form_residue,
    confluent_heun_reduce,
    derive,
    lame_coefficient_checks,
    lame_local_bases,
    lame_reduce,
    lame_residue,
    printed_coefficient_checks,
    printed_lame_residue,
    ve2_residues,
    ve2_sources,
    weierstrass_coefficients,
    weierstrass_series,
    whittaker_reduce,
)


def trap(A, B, C, D, E, F, G=0, h=0):
    return TrapParams(*(Fraction(v) for v in (A, B, C, D, E, F, G)), h=Fraction(h))


# B, C, E = 2, 3, 1 puts the roots of Ez² + Cz + B at -1 and -2
FIXTURE = trap(8, 2, 3, 1, 1, 2)


class TestTrapParams:
    def test_from_strings(self):
        params = TrapParams.from_strings({"A": "1/2", "B": "2", "C": "-3", "D": "0",
                                          "E": "1", "F": "5/3", "G": "0"})
        assert params.A == Fraction(1, 2)
        assert params.F == Fraction(5, 3)
        assert params.h == 0

    def test_missing_parameter_names_the_flag(self):
        with pytest.raises(ParseError) as excinfo:
            TrapParams.from_strings({"A": "1", "B": "2"})
        assert excinfo.value.flag == "C"

    def test_with_changes_keeps_other_fields(self):
        changed = FIXTURE.with_changes(D=Fraction(5))
        assert changed.D == 5
        assert changed.as_tuple()[:3] == FIXTURE.as_tuple()[:3]


class TestDerive:
    def test_fixture_roots_and_exponents(self):
        derived = derive(FIXTURE)
        assert derived.z1 == -1
        assert derived.z2 == -2
        assert derived.radicand == 1
        assert derived.q == RationalValue(Fraction(2))
        assert derived.p == RationalValue(Fraction(3))
        assert derived.b0 == -4
        assert derived.b_inf == -2

    def test_residues_of_b_sum_to_zero(self):
        derived = derive(FIXTURE)
        assert derived.alpha_decomposed == Fraction(11, 2)
        assert derived.beta == -9
        assert derived.gamma == Fraction(7, 2)
        assert derived.alpha_decomposed + derived.beta + derived.gamma == 0

    def test_printed_alpha_is_reported(self):
        derived = derive(FIXTURE)
        assert derived.alpha == Fraction(13, 2)
        assert derived.discrepancies

    def test_irrational_roots(self):
        derived = derive(trap(1, 1, 3, 0, 1, 0))
        assert not derived.z1.is_rational
        assert derived.z1 + derived.z2 == -3
        assert derived.z1 * derived.z2 == 1

    def test_p_one_when_F_vanishes(self):
        assert derive(trap(1, 2, 3, 1, 1, 0)).p == RationalValue(Fraction(1))

    @pytest.mark.parametrize("params,reason", [
        (trap(1, 0, 3, 1, 1, 2), "B=0"),
        (trap(1, 2, 3, 1, 0, 2), "E=0"),
        (trap(1, 1, 2, 1, 1, 2), "C^2=4BE"),
    ])
    def test_degenerate_branches(self, params, reason):
        with pytest.raises(DegenerateBranch) as excinfo:
            derive(params)
        assert reason in str(excinfo.value)


class TestSecondOrder:
    def test_fixture_component_residues(self):
        at_z1 = ve2_residues(FIXTURE, "z1")
        at_z2 = ve2_residues(FIXTURE, "z2")
        assert at_z1.components[0] == 3
        assert at_z2.components[0] == Fraction(-7, 4)
        assert at_z1.displayed_product == -at_z1.components[0]
        assert at_z2.displayed_product == -at_z2.components[0]

    def test_half_integer_components_vanish(self):
        for point in ("z1", "z2"):
            residues = ve2_residues(FIXTURE, point)
            assert residues.components[1].is_zero
            assert residues.components[3].is_zero

    def test_closed_form(self):
        assert closed_form_residue(FIXTURE, 1) == -1
        assert closed_form_residue(FIXTURE, 2) == Fraction(-3, 4)
        with pytest.raises(PreconditionViolation):
            closed_form_residue(FIXTURE, 3)

    def test_displayed_product_independent_of_A(self):
        for A in (1, 3, Fraction(1, 2)):
            assert ve2_residues(FIXTURE.with_changes(A=Fraction(A)), "z1").displayed_product == -3

    def test_closed_form_matches_displayed_product_when_F_vanishes(self):
        params = trap(8, 2, 3, 5, 1, 0)
        at_z1 = ve2_residues(params, "z1")
        at_z2 = ve2_residues(params, "z2")
        assert at_z1.displayed_product == at_z1.closed_form
        assert at_z2.displayed_product == -at_z2.closed_form

    @pytest.mark.parametrize("A,B,E", [
        (1, 1, -1), (2, 3, -5), (1, 2, -3), (3, 1, -4), (1, 4, -1),
        (5, 2, -2), (7, -2, 3), (1, -1, 1), (2, 5, -2), (1, 3, -12),
    ])
    def test_vanishing_locus(self, A, B, E):
        params = trap(A, B, 0, 0, E, 0)
        for point in ("z1", "z2"):
            residues = ve2_residues(params, point)
            assert residues.displayed_product.is_zero
            assert residues.closed_form.is_zero
            first, second, third, fourth = residues.components
            assert first.is_zero
            assert second.is_zero
            assert third == Fraction(3 * E, B)
            assert fourth.is_zero

    def test_vanishing_locus_is_recorded(self):
        data = ve2_sources(trap(1, 1, 0, 0, -1, 0))
        flagged = [m for m in data.discrepancies if "displayed product vanishes" in m]
        assert len(flagged) == 2
        assert "-3" in flagged[0]

    def test_unknown_point(self):
        with pytest.raises(PreconditionViolation):
            ve2_residues(FIXTURE, "inf")

    def test_sources_and_wronskian_constants(self):
        data = ve2_sources(FIXTURE)
        assert len(data.K2_1) == 1
        assert len(data.K2_2) == 2
        for point in ("z1", "z2"):
            constants = data.wronskian_constants[point]
            assert constants["c1"] == -2
            assert constants["c2"] == 1
            assert constants["l1"] == -2
        assert data.any_nonzero
        assert data.discrepancies
        assert set(data.to_dict()["residues"]) == {"z1", "z2"}

    def test_tangential_printed_coefficient_agrees(self):
        checks = {check.name: check for check in printed_coefficient_checks(FIXTURE)}
        assert checks["xi12_1"].computed == Fraction(-1, 2)
        assert checks["xi12_1"].agrees


class TestWeierstrass:
    def test_leading_coefficients(self):
        g2, g3 = Fraction(4), Fraction(-3, 2)
        c = weierstrass_coefficients(g2, g3, 5)
        assert c[2] == g2 / 20
        assert c[3] == g3 / 28
        assert c[4] == g2 ** 2 / 1200
        assert c[5] == 3 * g2 * g3 / 6160

    def test_differential_identity(self):
        g2, g3 = Fraction(7, 3), Fraction(-2, 5)
        t = sympy.Symbol("t")
        c = weierstrass_coefficients(g2, g3, 8)
        wp = t ** -2 + sum(sympy.Rational(v.numerator, v.denominator) * t ** (2 * k - 2) for k, v in c.items())
        g2s = sympy.Rational(g2.numerator, g2.denominator)
        g3s = sympy.Rational(g3.numerator, g3.denominator)
        defect = sympy.expand(sympy.diff(wp, t) ** 2 - 4 * wp ** 3 + g2s * wp + g3s)
        for power in range(-6, 10):
            assert defect.coeff(t, power) == 0

    def test_vanishing_invariants(self):
        series = weierstrass_series(0, 0, 10)
        assert series.exponent == -2
        assert series.coefficient(-2) == 1
        assert all(c.is_zero for c in series.coefficients[1:])

    def test_short_order_rejected(self):
        with pytest.raises(PreconditionViolation):
            weierstrass_series(1, 1, 3)


class TestLame:
    def test_palpha_for_n_three(self):
        data = lame_reduce(trap(0, 1, 2, 6, 0, 0))
        assert data.integer_n == 3
        assert data.N == 12
        palpha = data.palpha
        assert palpha.a1 == Fraction(1, 3)
        assert palpha.b1 == -3
        assert palpha.c1 == Fraction(11, 3)
        assert palpha.d1 == 15
        assert palpha.d2 == 1
        assert palpha.a2 == palpha.b2 == palpha.c2 == 0

    def test_printed_invariants(self):
        data = lame_reduce(trap(1, 3, 1, 3, 0, 0))
        assert data.g2 == 4
        assert data.g3 == Fraction(-3, 2)
        assert data.discriminant == Fraction(13, 4)
        assert data.g2_orbit == 3
        assert data.g3_orbit == 1

    def test_energy_enters_g3(self):
        data = lame_reduce(trap(1, 3, 2, 6, 0, 0), h=Fraction(1))
        assert data.g3 == Fraction(-3, 2) - 1
        assert data.g3_orbit == 0

    def test_shift_discrepancy_is_reported(self):
        data = lame_reduce(trap(0, 1, 2, 6, 0, 0))
        assert data.shift == 2
        assert data.printed_shift == 3
        assert data.discrepancies

    def test_non_integer_n(self):
        assert lame_reduce(trap(1, 1, 1, 1, 0, 0)).integer_n is None

    @pytest.mark.parametrize("params", [
        trap(1, 1, 1, 3, 1, 0),
        trap(1, 1, 1, 3, 0, 1),
        trap(1, 1, 0, 3, 0, 0),
        trap(1, 1, 1, 0, 0, 0),
    ])
    def test_branch_mismatch(self, params):
        with pytest.raises(BranchMismatch):
            lame_reduce(params)

    def test_local_bases_for_n_three(self):
        A, B = Fraction(1), Fraction(3)
        normal, tangential = lame_local_bases(trap(A, B, 1, 3, 0, 0), 8)
        assert normal.second.exponent == -3
        assert normal.second.coefficient(-1) == (A - B) / 5
        assert normal.second.coefficient(1) == (2 * A ** 2 - 4 * A * B + B ** 2) / 60
        assert tangential.second.coefficient(-1).is_zero
        assert tangential.second.coefficient(1) == -B ** 2 / 60

    def test_coefficient_checks(self):
        checks = lame_coefficient_checks(trap(0, 1, 1, 3, 0, 0))
        by_name = {check.name: check for check in checks}
        assert by_name["xi11_2[t^-1]"].agrees
        assert not by_name["xi11_2[t^1]"].agrees

    @pytest.mark.parametrize("A,B,C,h", [
        (1, 2, 1, 0),
        (0, 1, 2, 0),
        (3, -1, 1, 0),
        (2, 5, -3, Fraction(1, 2)),
        (1, 1, 1, 0),
    ])
    def test_residue_vanishes(self, A, B, C, h):
        params = trap(A, B, C, 3 * C, 0, 0, h=h)
        assert lame_residue(params) == 0

    def test_residue_needs_n_three(self):
        with pytest.raises(PreconditionViolation):
            lame_residue(trap(1, 1, 1, 1, 0, 0))

    def test_printed_quartic(self):
        assert printed_lame_residue(trap(0, 1, 1, 3, 0, 0)) == Fraction(3 * 23, 13500)
        assert printed_lame_residue(trap(2, 2, 1, 3, 0, 0)).is_zero


class TestReductions:
    def test_whittaker_mu(self):
        data = whittaker_reduce(trap(2, 1, 0, 0, 0, 3))
        assert data.kappa.is_zero
        assert data.mu_squared == Fraction(5, 2)
        assert data.mu == IrrationalReal(Fraction(5, 2))
        assert data.real_branch

    def test_whittaker_kappa_branches(self):
        real = whittaker_reduce(trap(1, 1, 0, 2, 0, 4))
        assert real.kappa == Fraction(-1, 2)
        imaginary = whittaker_reduce(trap(1, 1, 0, 2, 0, -1))
        assert imaginary.kappa == QuadExt(0, -1, -1)
        assert not imaginary.real_branch

    def test_whittaker_branch_mismatch(self):
        with pytest.raises(BranchMismatch):
            whittaker_reduce(trap(1, 1, 1, 0, 0, 1))
        with pytest.raises(BranchMismatch):
            whittaker_reduce(trap(1, 1, 0, 0, 0, 0))

    def test_confluent_heun_constants(self):
        data = confluent_heun_reduce(trap(2, 1, 2, 1, 1, 2))
        assert data.beta_squared == 9
        assert data.gamma_squared == 9
        assert data.alpha_squared == 36
        assert data.eta == Fraction(-1, 2)
        assert data.delta == 0

    def test_confluent_heun_branch_mismatch(self):
        with pytest.raises(BranchMismatch):
            confluent_heun_reduce(trap(1, 1, 3, 1, 1, 2))
