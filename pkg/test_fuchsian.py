"""
Tests for the local analysis of Fuchsian equations: partial fractions,
indicial exponents, Frobenius series, Wronskians, residues and trace data.
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from exactnum import QuadExt
from fuchsian import (
    INFINITY,
    FrobeniusSeries,
    FuchsODE,
    IndicialPair,
    PartialFractions,
    PoleTerm,
    frobenius_expand,
    indicial_exponents,
    normalized_local_pair,
    ode_defect,
    partial_fractions,
    residue_at,
    series_add,
    series_mul,
    trace_data,
)
from utils.errors import (
    ExpansionPointMismatch,
    ExponentsOutsideField,
    InsufficientTruncation,
    IrregularSingularPoint,
    RadicandMismatch,
    ResonantCase,
)
from ve import TrapParams, build_nve, build_tangential_ve, generic_roots

Z = sympy.Symbol("z")


def as_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def trap(A, B, C, D, E, F, G=0):
    return TrapParams(*(Fraction(v) for v in (A, B, C, D, E, F, G)))


def constant_solution_ode():
    """ξ'' + ξ'/z = 0"""
    return FuchsODE(PartialFractions((PoleTerm(0, 1, 1),)), PartialFractions(), name="flat")


def random_generic_params(rng):
    while True:
        B = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        E = Fraction(rng.choice([-1, 1]) * rng.randint(1, 6), rng.randint(1, 3))
        C = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        if C * C != 4 * B * E:
            q = Fraction(rng.randint(0, 6), rng.randint(1, 4))
            p = Fraction(rng.randint(0, 6), rng.randint(1, 4))
            return trap(q * q * B, B, C, Fraction(rng.randint(-4, 4)), E, (p * p - 1) * E / 4)


class TestPartialFractions:
    def test_matches_sympy_apart(self):
        numerator = [1, 2, 3]
        roots = [(0, 2), (1, 1), (-2, 1)]
        decomposed = partial_fractions(numerator, 2, roots)
        expression = (1 + 2 * Z + 3 * Z ** 2) / (2 * Z ** 2 * (Z - 1) * (Z + 2))
        expected = sympy.apart(expression, Z)
        for value in (Fraction(3), Fraction(5, 2), Fraction(-7, 3)):
            exact = decomposed.evaluate(value)
            assert exact == as_fraction(expected.subs(Z, sympy.Rational(value.numerator, value.denominator)))
        for pole, _ in roots:
            assert decomposed.residue(pole) == as_fraction(sympy.residue(expression, Z, pole))

    def test_polynomial_quotient(self):
        # z³ / (z − 1) = z² + z + 1 + 1/(z − 1)
        decomposed = partial_fractions([0, 0, 0, 1], 1, [(1, 1)])
        assert dict(decomposed.polynomial) == {0: 1, 1: 1, 2: 1}
        assert decomposed.residue(1) == 1

    @pytest.mark.parametrize("d", [2, -3, Fraction(5, 4)])
    def test_conjugate_irrational_poles(self, d):
        # (1 + z + z² + z³ + z⁴ + z⁵) / (3·z²·(z² − d))
        root = QuadExt.sqrt(d)
        numerator = [1, 1, 1, 1, 1, 1]
        decomposed = partial_fractions(numerator, 3, [(0, 2), (root, 1), (-root, 1)])
        assert decomposed.polynomial_degree == 1
        for value in (Fraction(3), Fraction(-1, 2), Fraction(7, 5)):
            direct = sum(value ** k for k in range(6)) / (3 * value ** 2 * (value ** 2 - d))
            assert decomposed.evaluate(value) == direct

    def test_poles_from_two_fields(self):
        with pytest.raises(RadicandMismatch):
            partial_fractions([1], 1, [(QuadExt.sqrt(2), 1), (QuadExt.sqrt(3), 1)])

    def test_nve_matches_direct_decomposition(self):
        params = trap(1, 1, 1, 1, 1, 1)
        a, b = build_nve(params).numeric()
        a_expr = (4 * Z ** 2 + 3 * Z + 2) / (2 * Z * (Z ** 2 + Z + 1))
        b_expr = -(Z ** 2 + Z + 1) / (Z ** 2 * (Z ** 2 + Z + 1))
        for value in (0.7, 2.5 + 1j, -3.25):
            assert a(value) == pytest.approx(complex(a_expr.subs(Z, value)), rel=1e-12)
            assert b(value) == pytest.approx(complex(b_expr.subs(Z, value)), rel=1e-12)

    def test_laurent_at_regular_point(self):
        geometric = PartialFractions((PoleTerm(1, 1, 1),)).laurent_at(QuadExt(0), 6)
        assert geometric.exponent == 0
        assert all(c == -1 for c in geometric.coefficients)


class TestIndicialExponents:
    def test_origin_gives_plus_minus_q(self):
        pair = indicial_exponents(build_nve(trap(4, 1, 3, 1, 1, 6)), 0)
        assert pair.rational_exponents == (2, -2)

    def test_infinity_gives_half_one_plus_minus_p(self):
        pair = indicial_exponents(build_nve(trap(4, 1, 3, 1, 1, 6)), INFINITY)
        assert pair.rational_exponents == (3, -2)

    def test_roots_have_gap_one_half(self):
        params = trap(1, 2, 3, 1, 1, 2)
        z1, z2, _ = generic_roots(params)
        for point in (z1, z2):
            assert indicial_exponents(build_nve(params), point).rational_exponents == (Fraction(1, 2), 0)

    def test_vieta_and_symbolic_identities(self):
        rng = random.Random(5)
        for _ in range(50):
            params = random_generic_params(rng)
            ode = build_nve(params)
            at_zero = indicial_exponents(ode, 0)
            at_infinity = indicial_exponents(ode, INFINITY)
            q2 = params.A / params.B
            p2 = 1 + 4 * params.F / params.E
            assert at_zero.A == 1 and at_zero.B == -q2
            # λ² = q²
            assert at_zero.is_root(QuadExt.sqrt(q2)) and at_zero.is_root(-QuadExt.sqrt(q2))
            # ρ = (1 ± p)/2
            assert at_infinity.is_root((1 + QuadExt.sqrt(p2)) / 2)
            assert at_infinity.is_root((1 - QuadExt.sqrt(p2)) / 2)
            roots = at_zero.exponents
            assert roots[0] + roots[1] == 1 - at_zero.A
            assert roots[0] * roots[1] == at_zero.B

    def test_irrational_center_and_root_in_one_field(self):
        # center √2, half-root √8/2 = √2
        pair = IndicialPair(QuadExt(0), QuadExt(1, -2, 2), QuadExt(0))
        high, low = pair.exponents
        assert high == QuadExt(0, 2, 2)
        assert low == 0
        assert pair.is_root(high) and pair.is_root(low)
        assert pair.rational_exponents is None

    def test_exponents_needing_two_square_roots(self):
        # center √2, half-root √12/2 = √3
        pair = IndicialPair(QuadExt(0), QuadExt(1, -2, 2), QuadExt(-1))
        with pytest.raises(ExponentsOutsideField):
            pair.exponents
        assert pair.rational_exponents is None
        assert pair.to_dict()["exponents"] is None

    def test_irrational_discriminant(self):
        pair = IndicialPair(QuadExt(0), QuadExt(1, -2, 2), QuadExt(0, 1, 2))
        with pytest.raises(ExponentsOutsideField):
            pair.exponents

    def test_irregular_point(self):
        ode = FuchsODE(PartialFractions(), PartialFractions((PoleTerm(0, 3, 1),)))
        with pytest.raises(IrregularSingularPoint):
            indicial_exponents(ode, 0)


class TestFrobenius:
    def test_constant_solution(self):
        series = frobenius_expand(constant_solution_ode(), 0, 0, 12)
        assert series.coefficients[0] == 1
        assert all(c.is_zero for c in series.coefficients[1:])

    def test_tangential_coefficient_at_z1(self):
        params = trap(1, 2, 3, 1, 1, 2)
        z1, z2, _ = generic_roots(params)
        series = frobenius_expand(build_tangential_ve(params), z1, Fraction(1, 2), 6)
        assert series.coefficients[1] == (3 * z1 - 2 * z2) / (2 * z1 * (z1 - z2))
        assert series.coefficients[1] == Fraction(-1, 2)

    def test_tangential_half_solution_is_velocity(self):
        # ż ∝ z·(z − z₂)^½ near z₁, so the normalized series is (1 + u/z₁)(1 + u/δ)^½
        params = trap(1, 2, 3, 1, 1, 2)
        z1, z2, _ = generic_roots(params)
        delta = z1 - z2
        series = frobenius_expand(build_tangential_ve(params), z1, Fraction(1, 2), 6)
        assert series.coefficients[2] == 1 / (2 * z1 * delta) - 1 / (8 * delta ** 2)

    def test_normal_coefficient_at_z1(self):
        params = trap(-2, 2, 3, 1, 1, 2)
        z1, _, _ = generic_roots(params)
        series = frobenius_expand(build_nve(params), z1, Fraction(1, 2), 6)
        assert series.coefficients[1] == Fraction(-1, 2)

    def test_defect_vanishes_in_window(self):
        rng = random.Random(9)
        for _ in range(5):
            params = random_generic_params(rng)
            z1, _, _ = generic_roots(params)
            series = frobenius_expand(build_nve(params), z1, Fraction(1, 2), 10)
            defect = ode_defect(build_nve(params), series)
            assert all(c.is_zero for c in defect.coefficients)

    def test_resonant_exponent(self):
        with pytest.raises(ResonantCase) as excinfo:
            frobenius_expand(build_nve(trap(4, 1, 3, 1, 1, 6)), 0, -2, 8)
        assert excinfo.value.gap == 4

    def test_prefix_is_stable_under_longer_truncation(self):
        params = trap(1, 2, 3, 1, 1, 2)
        z1, _, _ = generic_roots(params)
        short = frobenius_expand(build_nve(params), z1, 0, 12)
        long = frobenius_expand(build_nve(params), z1, 0, 24)
        assert long.coefficients[:12] == short.coefficients

    def test_normalized_pair_has_unit_wronskian(self):
        params = trap(1, 2, 3, 1, 1, 2)
        z1, _, _ = generic_roots(params)
        pair = normalized_local_pair(build_nve(params).local_data(z1, 12), 12)
        assert pair.first_constant == -2
        assert pair.wronskian.coefficient(0) == 1
        assert all(c.is_zero for c in pair.wronskian.coefficients[1:])


class TestSeriesAlgebra:
    def test_product_of_conjugate_factors(self):
        first = FrobeniusSeries(0, Fraction(1, 2), (1, 1, 0))
        second = FrobeniusSeries(0, Fraction(-1, 2), (1, -1, 0))
        product = series_mul(first, second)
        assert product.exponent == 0
        assert product.coefficients == (QuadExt(1), QuadExt(0), QuadExt(-1))

    def test_identity_factor(self):
        series = FrobeniusSeries(0, Fraction(1, 3), (2, 3, 5))
        assert series_mul(series, FrobeniusSeries(0, 0, (1, 0, 0))) == series

    def test_mismatched_points(self):
        with pytest.raises(ExpansionPointMismatch):
            series_mul(FrobeniusSeries(0, 0, (1,)), FrobeniusSeries(1, 0, (1,)))

    def test_residues(self):
        assert residue_at(FrobeniusSeries(0, -1, (2, 5, 7)), 0) == 2
        assert residue_at(FrobeniusSeries(0, 0, (2, 5, 7)), 0) == 0
        with pytest.raises(InsufficientTruncation):
            residue_at(FrobeniusSeries(0, -3, (1,)), 0)

    def test_residue_of_product_is_bilinear(self):
        f = FrobeniusSeries(0, -2, (1, 2, 3, 4))
        g = FrobeniusSeries(0, -2, (5, -1, 0, 2))
        h = FrobeniusSeries(0, 0, (3, 1, 4, 1))
        left = residue_at(series_mul(series_add(f, g.scale(3)), h), 0)
        right = residue_at(series_mul(f, h), 0) + 3 * residue_at(series_mul(g, h), 0)
        assert left == right

    def test_evaluate_follows_continuous_branch(self):
        series = FrobeniusSeries(0, Fraction(1, 2), (1,))
        value = complex(series.evaluate(4, 2 * 3.141592653589793))
        assert value == pytest.approx(-2, abs=1e-12)


class TestTraceData:
    def test_q_one_p_five(self):
        params = trap(1, 1, 1, 3, 1, 6)
        data = trace_data(build_nve(params))
        assert data.at(0).value == -2
        assert data.at(INFINITY).value == -2
        z1, z2, _ = generic_roots(params)
        assert data.at(z1).value == 0
        assert data.at(z2).value == 0

    def test_exactness_classes(self):
        data = trace_data(build_nve(trap(2, 1, 3, 1, 1, 6)))
        assert data.at(0).exactness == "transcendental"
        data = trace_data(build_nve(trap(Fraction(1, 64), 1, 3, 1, 1, 6)))
        # Δ₀ = 2q = 1/4
        assert data.at(0).exactness == "algebraic-irrational"
