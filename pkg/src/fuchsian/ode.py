"""
Second-order linear ODEs ξ'' + a(z)ξ' + b(z)ξ = 0 in partial-fraction form,
with local analysis at regular singular points: indicial exponents, Frobenius
expansion, Wronskians and monodromy trace data.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from exactnum import (
    QuadExt,
    RationalValue,
    SqrtClass,
    format_rational,
    format_sqrt_class,
    rational_cos_pi,
    sqrt_classify,
)
from utils.errors import (
    ExponentsOutsideField,
    IrregularSingularPoint,
    PreconditionViolation,
    RadicandMismatch,
    ResonantCase,
    WronskianDegenerate,
)
from utils.logger import get_logger
from .rational_functions import PartialFractions
from .series import INFINITY, ONE_Q, ZERO_Q, FrobeniusSeries, Point, coerce_point, format_point, series_add, series_mul

logger = get_logger(__name__)

DEFAULT_TRUNCATION_ORDER = 12


@dataclass(frozen=True)
class FuchsODE:
    """ξ'' + a(z)ξ' + b(z)ξ = 0 with a, b exact partial fractions."""

    a: PartialFractions
    b: PartialFractions
    name: str = "ode"

    @property
    def a_terms(self):
        return self.a.terms

    @property
    def b_terms(self):
        return self.b.terms

    def finite_singular_points(self) -> List[QuadExt]:
        points = list(self.a.poles())
        for pole in self.b.poles():
            if pole not in points:
                points.append(pole)
        return points

    def singular_points(self) -> List[Point]:
        """Finite poles, then infinity unless it is an ordinary point."""
        points: List[Point] = list(self.finite_singular_points())
        if not self._ordinary_at_infinity():
            points.append(INFINITY)
        return points

    def _ordinary_at_infinity(self) -> bool:
        # ordinary iff a = 2/z + O(z⁻²) and b = O(z⁻⁴)
        if self.a.polynomial or self.b.polynomial:
            return False
        a_inf = self.a.laurent_at(INFINITY, 2)
        b_inf = self.b.laurent_at(INFINITY, 4)
        return (a_inf.coefficient(0).is_zero and a_inf.coefficient(1) == 2
                and all(b_inf.coefficient(k).is_zero for k in range(4)))

    def local_data(self, point, n_terms: int) -> "LocalData":
        """
        Taylor data p(u) = u·a, q(u) = u²·b at a regular singular point.

        At infinity w = 1/z turns the equation into η'' + (2/w − a(1/w)/w²)η'
        + b(1/w)/w⁴·η = 0, so p = 2 − a(1/w)/w and q = b(1/w)/w².

        Raises:
            IrregularSingularPoint: When a has a pole of order > 1 or b of order > 2
        """
        point = coerce_point(point)
        if point is INFINITY:
            extra = max(self.a.polynomial_degree, self.b.polynomial_degree, 0) + 3
            p_series = -self.a.laurent_at(INFINITY, n_terms + extra, shift=-1)
            q_series = self.b.laurent_at(INFINITY, n_terms + extra, shift=-2)
            p = _taylor_part(p_series, n_terms, point, "a")
            p[0] = p[0] + 2
            q = _taylor_part(q_series, n_terms, point, "b")
        else:
            p_series = self.a.laurent_at(point, n_terms + self.a.pole_order_at(point), shift=1)
            q_series = self.b.laurent_at(point, n_terms + self.b.pole_order_at(point), shift=2)
            p = _taylor_part(p_series, n_terms, point, "a")
            q = _taylor_part(q_series, n_terms, point, "b")
        return LocalData(point, tuple(p), tuple(q))

    def numeric(self, precision: int = 53):
        """(a, b) as complex callables for the numeric oracles."""
        return self.a.numeric(precision), self.b.numeric(precision)

    def to_dict(self) -> dict:
        return {"name": self.name, "a": self.a.to_dict(), "b": self.b.to_dict()}


def _taylor_part(series: FrobeniusSeries, n_terms: int, point: Point, which: str) -> List[QuadExt]:
    for k, c in enumerate(series.coefficients):
        if series.exponent + k < 0 and not c.is_zero:
            raise IrregularSingularPoint(
                f"coefficient {which} exceeds the Fuchsian pole bound at {format_point(point)}")
    return [series.coefficient(k) for k in range(n_terms)]


@dataclass(frozen=True)
class LocalData:
    """p(u) = u·a and q(u) = u²·b as Taylor coefficient tuples."""

    point: Point
    p: Tuple[QuadExt, ...]
    q: Tuple[QuadExt, ...]

    @property
    def A(self) -> QuadExt:
        return self.p[0]

    @property
    def B(self) -> QuadExt:
        return self.q[0]

    @property
    def n_terms(self) -> int:
        return min(len(self.p), len(self.q))

    def indicial(self, x) -> QuadExt:
        """x(x − 1) + A·x + B."""
        x = QuadExt.coerce(x)
        return x * x + (self.A - 1) * x + self.B


@dataclass(frozen=True)
class IndicialPair:
    """Roots of λ(λ − 1) + Aλ + B = 0: center ± √discriminant / 2."""

    point: Point
    A: QuadExt
    B: QuadExt

    @property
    def center(self) -> QuadExt:
        return (1 - self.A) / 2

    @property
    def discriminant(self) -> QuadExt:
        return (self.A - 1) ** 2 - 4 * self.B

    @property
    def delta(self) -> Optional[SqrtClass]:
        """√((A − 1)² − 4B) when the discriminant is rational."""
        if not self.discriminant.is_rational:
            return None
        return sqrt_classify(self.discriminant.to_rational())

    @property
    def exponents(self) -> Tuple[QuadExt, QuadExt]:
        """
        Both roots, larger real part first.

        Raises:
            ExponentsOutsideField: When the roots do not lie in one quadratic
                field (an irrational discriminant, or an irrational center and
                half-root with different radicands)
        """
        if not self.discriminant.is_rational:
            raise ExponentsOutsideField(
                f"indicial discriminant {self.discriminant} at {format_point(self.point)} is irrational")
        half_root = QuadExt.sqrt(self.discriminant.to_rational()) / 2
        try:
            return self.center + half_root, self.center - half_root
        except RadicandMismatch:
            raise ExponentsOutsideField(
                f"exponents {self.center} ± {half_root} at {format_point(self.point)} "
                f"need two square roots") from None

    @property
    def rational_exponents(self) -> Optional[Tuple[Fraction, Fraction]]:
        try:
            roots = self.exponents
        except ExponentsOutsideField:
            return None
        if not all(r.is_rational for r in roots):
            return None
        return roots[0].to_rational(), roots[1].to_rational()

    def is_root(self, exponent) -> bool:
        x = QuadExt.coerce(exponent)
        return (x * x + (self.A - 1) * x + self.B).is_zero

    def to_dict(self) -> dict:
        delta = self.delta
        try:
            roots = [str(r) for r in self.exponents]
        except ExponentsOutsideField:
            roots = None
        return {
            "point": format_point(self.point),
            "A": str(self.A),
            "B": str(self.B),
            "delta": format_sqrt_class(delta) if delta is not None else None,
            "exponents": roots,
        }


def indicial_exponents(ode: FuchsODE, point) -> IndicialPair:
    """
    Indicial data at a regular singular point.

    Raises:
        IrregularSingularPoint: If pole orders exceed the Fuchsian bounds
    """
    local = ode.local_data(point, 1)
    return IndicialPair(local.point, local.A, local.B)


def frobenius_from_local(local: LocalData, exponent, order: int,
                         allow_free_resonance: bool = False) -> FrobeniusSeries:
    """
    Frobenius recurrence cₙ·F(n+λ) = −Σ_{k≥1} c_{n−k}·[(n−k+λ)·p_k + q_k], c₀ = 1.

    Args:
        local: Taylor data at the expansion point
        exponent: Rational indicial root λ
        order: Number of coefficients to compute
        allow_free_resonance: When the other root exceeds λ by an integer g and
            the recurrence right-hand side at n = g vanishes, set c_g = 0 and
            continue instead of failing

    Raises:
        PreconditionViolation: If exponent is not an indicial root
        ResonantCase: If the other root exceeds exponent by a positive integer
    """
    exponent = QuadExt.coerce(exponent)
    if not exponent.is_rational:
        raise PreconditionViolation("series machinery takes rational exponents only")
    if local.n_terms < order:
        raise PreconditionViolation(f"local data has {local.n_terms} terms, {order} requested")
    if not local.indicial(exponent).is_zero:
        raise PreconditionViolation(f"{exponent} is not an indicial root at {format_point(local.point)}")
    other = 1 - local.A - exponent
    gap = other - exponent
    resonance = None
    if gap.is_rational and gap.to_rational().denominator == 1 and gap.to_rational() > 0:
        resonance = int(gap.to_rational())
        if not allow_free_resonance:
            raise ResonantCase(resonance)

    lam = exponent.to_rational()
    coefficients = [ONE_Q]
    for n in range(1, order):
        acc = ZERO_Q
        for k in range(1, n + 1):
            c = coefficients[n - k]
            if c.is_zero:
                continue
            acc = acc + c * ((lam + n - k) * local.p[k] + local.q[k])
        denominator = local.indicial(lam + n)
        if denominator.is_zero:
            if not acc.is_zero:
                raise ResonantCase(n, f"logarithmic obstruction {acc} at resonance {n}")
            logger.debug("free resonance at n=%d for exponent %s", n, format_rational(lam))
            coefficients.append(ZERO_Q)
            continue
        coefficients.append(-acc / denominator)
    return FrobeniusSeries(local.point, lam, tuple(coefficients))


def frobenius_expand(ode: FuchsODE, point, exponent, order: int = DEFAULT_TRUNCATION_ORDER) -> FrobeniusSeries:
    """
    Local solution u^λ·Σ cₙuⁿ with c₀ = 1 at a regular singular point.

    Raises:
        ResonantCase: When the other root exceeds exponent by a positive integer
        IrregularSingularPoint: When point is not regular singular
    """
    return frobenius_from_local(ode.local_data(point, order), exponent, order)


def ode_defect(ode: FuchsODE, series: FrobeniusSeries) -> FrobeniusSeries:
    """u²·(ξ'' + aξ' + bξ) for a local series ξ, as a series starting at u^λ."""
    local = ode.local_data(series.expansion_point, series.truncation_order)
    return defect_from_local(local, series)


def defect_from_local(local: LocalData, series: FrobeniusSeries) -> FrobeniusSeries:
    p = FrobeniusSeries(local.point, 0, local.p)
    q = FrobeniusSeries(local.point, 0, local.q)
    first = series.derivative()
    second = first.derivative()
    terms = [second.shift(2), series_mul(p, first.shift(1)), series_mul(q, series)]
    total = terms[0]
    for term in terms[1:]:
        total = series_add(total, term)
    return total


def abel_factor(local: LocalData, n_terms: int) -> FrobeniusSeries:
    """
    g(u) = exp(−∫h), where a = A/u + h(u), so that W = const·u^(−A)·g.

    Computed from (n+1)·g_{n+1} = −Σ h_k·g_{n−k} with h_k = p_{k+1}.
    """
    g = [ONE_Q]
    for n in range(n_terms - 1):
        acc = ZERO_Q
        for k in range(n + 1):
            if k + 1 < len(local.p):
                acc = acc + local.p[k + 1] * g[n - k]
        g.append(-acc / (n + 1))
    return FrobeniusSeries(local.point, 0, tuple(g))


def wronskian(first: FrobeniusSeries, second: FrobeniusSeries) -> FrobeniusSeries:
    """W = s₁·s₂' − s₂·s₁' in the local variable."""
    return series_add(series_mul(first, second.derivative()), -series_mul(second, first.derivative()))


def normalized_wronskian(local: LocalData, first: FrobeniusSeries, second: FrobeniusSeries) -> FrobeniusSeries:
    """W·u^A / g, constant by Abel's identity; returns its series."""
    if not local.A.is_rational:
        raise PreconditionViolation("Abel normalization needs a rational local A")
    w = wronskian(first, second).shift(local.A.to_rational())
    g = abel_factor(local, w.truncation_order)
    return series_mul(w, g.reciprocal())


@dataclass(frozen=True)
class LocalPair:
    """Local basis scaled so that the Abel-normalized Wronskian is 1."""

    first: FrobeniusSeries
    second: FrobeniusSeries
    first_constant: QuadExt
    second_constant: QuadExt
    wronskian: FrobeniusSeries


def normalized_local_pair(local: LocalData, order: int,
                          allow_free_resonance: bool = False) -> LocalPair:
    """
    Frobenius pair for the two indicial roots λ₁ > λ₂ at a point.

    The second solution keeps leading coefficient 1; the first is scaled by
    1/(λ₂ − λ₁), which makes W·u^A/g equal to 1.

    Raises:
        WronskianDegenerate: If equal roots leave no independent pair, or the
            normalized Wronskian is not 1 within the truncation window
    """
    pair = IndicialPair(local.point, local.A, local.B)
    roots = pair.rational_exponents
    if roots is None:
        raise PreconditionViolation(f"irrational exponents at {format_point(local.point)}")
    high, low = roots
    if high == low:
        raise WronskianDegenerate(f"double indicial root at {format_point(local.point)}")
    first_constant = QuadExt(1) / (low - high)
    second_constant = QuadExt(1)
    first = frobenius_from_local(local, high, order).scale(first_constant)
    second = frobenius_from_local(local, low, order, allow_free_resonance=allow_free_resonance)
    omega = normalized_wronskian(local, first, second)
    if omega.coefficient(0) != 1 or any(not c.is_zero for c in omega.coefficients[1:]):
        raise WronskianDegenerate(f"normalized Wronskian at {format_point(local.point)} is not 1")
    return LocalPair(first, second, first_constant, second_constant, omega)


# -- trace data -------------------------------------------------------------

RATIONAL_VALUE = "rational-value"
ALGEBRAIC_IRRATIONAL = "algebraic-irrational"
TRANSCENDENTAL = "transcendental"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class TracePoint:
    """t = sign·2·cos(π·Δ), sign −1 at finite points and +1 at infinity."""

    point: Point
    delta: Optional[SqrtClass]
    sign: int
    exactness: str
    value: Optional[Fraction] = None

    @property
    def multiple(self) -> Optional[Fraction]:
        if isinstance(self.delta, RationalValue):
            return self.delta.value
        return None

    def to_dict(self) -> dict:
        return {
            "point": format_point(self.point),
            "delta": format_sqrt_class(self.delta) if self.delta is not None else None,
            "sign": self.sign,
            "exactness": self.exactness,
            "t": format_rational(self.value) if self.value is not None else self.symbolic(),
        }

    def symbolic(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        delta = format_sqrt_class(self.delta) if self.delta is not None else "?"
        return f"{prefix}2*cos(pi*{delta})"


@dataclass(frozen=True)
class TraceData:
    points: Tuple[TracePoint, ...] = field(default_factory=tuple)

    def at(self, point) -> TracePoint:
        point = coerce_point(point)
        for entry in self.points:
            if entry.point == point:
                return entry
        raise KeyError(format_point(point))

    def to_dict(self) -> dict:
        return {"points": [entry.to_dict() for entry in self.points]}


def _trace_point(local: LocalData) -> TracePoint:
    sign = 1 if local.point is INFINITY else -1
    pair = IndicialPair(local.point, local.A, local.B)
    delta = pair.delta
    if delta is None:
        return TracePoint(local.point, None, sign, UNDETERMINED)
    if isinstance(delta, RationalValue):
        cosine = rational_cos_pi(delta.value)
        if cosine is not None:
            return TracePoint(local.point, delta, sign, RATIONAL_VALUE, sign * 2 * cosine)
        return TracePoint(local.point, delta, sign, ALGEBRAIC_IRRATIONAL)
    return TracePoint(local.point, delta, sign, TRANSCENDENTAL)


def trace_data(ode: FuchsODE) -> TraceData:
    """
    Δ_s = √((A_s − 1)² − 4B_s) and t_s at every singular point.

    Raises:
        IrregularSingularPoint: If some singular point is irregular
    """
    entries = [_trace_point(ode.local_data(point, 1)) for point in ode.singular_points()]
    for entry in entries:
        logger.debug("trace at %s: delta=%s t=%s", format_point(entry.point),
                     entry.delta, entry.value if entry.value is not None else entry.exactness)
    return TraceData(tuple(entries))
