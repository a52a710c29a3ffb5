"""
Tests for exact scalars: rationals, square-root classes, ℚ(√d) arithmetic
and the rational-cosine independence criterion.
"""

import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from exactnum import (
    Imaginary,
    IrrationalReal,
    QuadExt,
    RationalValue,
    berger_independent,
    denominator_N,
    format_rational,
    parse_quadext,
    parse_rational,
    quad_arith,
    rational_cos_pi,
    rational_part_of_sum,
    sqrt_classify,
    to_complex,
    to_float,
)
from utils.errors import (
    DivisionByZeroNorm,
    NegativeRadicandEmbedding,
    ParseError,
    PreconditionViolation,
    RadicandMismatch,
)


class TestRationals:
    def test_parse_and_format(self):
        assert parse_rational("6/8") == Fraction(3, 4)
        assert parse_rational("-5") == Fraction(-5)
        assert format_rational(Fraction(3, 4)) == "3/4"
        assert format_rational(Fraction(10, 5)) == "2"

    @pytest.mark.parametrize("text", ["1/0", "1.5", " 1", "a", "1/-2", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(ParseError) as excinfo:
            parse_rational(text, flag="A")
        assert excinfo.value.flag == "A"

    @pytest.mark.parametrize("value,expected", [
        (Fraction(3, 4), 4), (Fraction(5), 1), (Fraction(-2, 3), 3), (Fraction(4, 6), 3),
    ])
    def test_denominator_N(self, value, expected):
        assert denominator_N(value) == expected

    def test_denominator_N_is_minimal_multiplier(self):
        rng = random.Random(7)
        for _ in range(100):
            r = Fraction(rng.randint(-50, 50), rng.randint(1, 30))
            n = denominator_N(r)
            assert (n * r).denominator == 1
            assert all((k * r).denominator != 1 for k in range(1, n))


class TestSqrtClassify:
    @pytest.mark.parametrize("r,expected", [
        (Fraction(4), RationalValue(Fraction(2))),
        (Fraction(9, 4), RationalValue(Fraction(3, 2))),
        (Fraction(2), IrrationalReal(Fraction(2))),
        (Fraction(-1, 4), Imaginary(Fraction(-1, 4))),
        (Fraction(0), RationalValue(Fraction(0))),
    ])
    def test_examples(self, r, expected):
        assert sqrt_classify(r) == expected

    def test_rational_roots_square_back(self):
        rng = random.Random(11)
        for _ in range(200):
            r = Fraction(rng.randint(0, 40) ** 2 if rng.random() < 0.5 else rng.randint(0, 200),
                         rng.randint(1, 15) ** 2)
            result = sqrt_classify(r)
            if isinstance(result, RationalValue):
                assert result.value >= 0
                assert result.value * result.value == r
            else:
                assert isinstance(result, IrrationalReal)
                assert sympy.sqrt(sympy.Rational(r.numerator, r.denominator)).is_rational is False


class TestQuadExt:
    def test_norm_identity(self):
        x = QuadExt(1, 1, 2)
        assert quad_arith(x, x.conjugate(), "mul") == -1

    def test_division_identity(self):
        root5 = QuadExt.sqrt(5)
        assert quad_arith(root5, root5, "div") == 1

    def test_sum_prints_canonically(self):
        result = quad_arith(QuadExt(3), QuadExt(0, 2, 7), "add")
        assert str(result) == "3+2*sqrt(7)"
        assert parse_quadext(str(result)) == result

    def test_perfect_square_radicand_normalizes(self):
        assert QuadExt(1, 3, 4) == QuadExt(7)
        assert QuadExt(1, 3, 4).is_rational

    @pytest.mark.parametrize("radicand,b,d", [
        (8, 2, 2), (12, 2, 3), (Fraction(1, 2), Fraction(1, 2), 2), (-8, 2, -2),
        (Fraction(-9, 5), Fraction(3, 5), -5), (50, 5, 2),
    ])
    def test_radicand_reduced_to_squarefree(self, radicand, b, d):
        root = QuadExt.sqrt(radicand)
        assert (root.a, root.b, root.d) == (0, b, d)

    def test_equal_fields_after_reduction(self):
        assert QuadExt(1, 1, 8) == QuadExt(1, 2, 2)
        assert QuadExt.sqrt(8) - 2 * QuadExt.sqrt(2) == 0
        assert str(QuadExt(3, 1, 18)) == "3+3*sqrt(2)"

    def test_zero_norm_division(self):
        with pytest.raises(DivisionByZeroNorm):
            quad_arith(QuadExt(1), QuadExt(0), "div")

    def test_radicand_mismatch(self):
        with pytest.raises(RadicandMismatch):
            QuadExt.sqrt(2) + QuadExt.sqrt(3)

    def test_field_axioms_on_random_triples(self):
        rng = random.Random(3)

        def element():
            return QuadExt(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                           Fraction(rng.randint(-9, 9), rng.randint(1, 5)), 13)

        for _ in range(50):
            x, y, z = element(), element(), element()
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            if not x.is_zero:
                assert x * (1 / x) == 1

    def test_to_float(self):
        assert float(to_float(QuadExt(1, 1, 2))) == pytest.approx(2.414213562373095, rel=1e-15)
        assert float(to_float(QuadExt(Fraction(1, 3)))) == pytest.approx(1 / 3, rel=1e-15)

    def test_negative_radicand_needs_complex_path(self):
        x = QuadExt.sqrt(-1)
        with pytest.raises(NegativeRadicandEmbedding):
            to_float(x)
        assert complex(to_complex(x)) == pytest.approx(1j)

    def test_rational_part_of_sum_merges_square_ratios(self):
        # √8 − 2√2 = 0
        assert rational_part_of_sum([QuadExt.sqrt(8), QuadExt(1, -2, 2)]) == 1
        assert rational_part_of_sum([QuadExt.sqrt(2), QuadExt.sqrt(3)]) is None


def _cyclotomic_rank(r1: Fraction, r2: Fraction) -> int:
    """Rank over ℚ of {1, cos πr₁, cos πr₂} written in the power basis of ℚ(ζ_M)."""
    x = sympy.Symbol("x")
    M = math.lcm(2 * r1.denominator, 2 * r2.denominator)
    phi = sympy.Poly(sympy.cyclotomic_poly(M, x), x)
    degree = phi.degree()

    def vector(r):
        # cos πr = (ζ^e + ζ^(−e))/2 with ζ = e^(2πi/M) and e = r·M/2
        e = int(r * M / 2) % M
        poly = sympy.Poly((x ** e + x ** ((M - e) % M)) / 2, x)
        remainder = poly.rem(phi)
        coefficients = list(reversed(remainder.all_coeffs()))
        return coefficients + [0] * (degree - len(coefficients))

    one = [1] + [0] * (degree - 1)
    return sympy.Matrix([one, vector(r1), vector(r2)]).rank()


class TestBerger:
    def test_examples(self):
        assert berger_independent(Fraction(1, 4), Fraction(1, 5)) is True
        assert berger_independent(Fraction(1, 3), Fraction(1, 4)) is False
        assert berger_independent(Fraction(1, 5), Fraction(2, 5)) is False

    @pytest.mark.parametrize("pair", [(Fraction(1, 2), Fraction(3, 2)), (Fraction(1, 5), Fraction(1, 5))])
    def test_precondition(self, pair):
        with pytest.raises(PreconditionViolation):
            berger_independent(*pair)

    def test_rational_cosines(self):
        assert rational_cos_pi(Fraction(1, 3)) == Fraction(1, 2)
        assert rational_cos_pi(Fraction(2, 3)) == Fraction(-1, 2)
        assert rational_cos_pi(Fraction(5)) == -1
        assert rational_cos_pi(Fraction(1, 4)) is None

    def test_matches_cyclotomic_oracle(self):
        values = sorted({Fraction(k, n) for n in range(1, 9) for k in range(1, 2 * n)})
        checked = 0
        for r1 in values:
            for r2 in values:
                if (r1 + r2).denominator == 1 or (r1 - r2).denominator == 1:
                    continue
                expected = _cyclotomic_rank(r1, r2) == 3
                assert berger_independent(r1, r2) is expected, (r1, r2)
                checked += 1
        assert checked > 500
