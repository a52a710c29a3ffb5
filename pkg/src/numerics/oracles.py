"""
Numeric oracles for the exact residues and series.

Local solutions are seeded from their exact Frobenius series near a singular
point and continued numerically along a circle around it; contour integrals
are trapezoid sums over the nodes, accumulated with mpmath.
"""

import cmath
import math
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from exactnum import to_complex
from fuchsian import FrobeniusSeries, FuchsODE
from utils.errors import PathThroughSingularity, PreconditionViolation, StepFailure, WronskianDegenerate
from utils.logger import get_logger
from ve import (
    TrapParams,
    build_nve,
    build_tangential_ve,
    lame_local_bases,
    lame_reduce,
    local_bases,
    point_location,
    source_terms,
)

logger = get_logger(__name__)

MIN_NODES = 64
DEFAULT_NODES = 128
RADIUS_FRACTION = 0.25
RTOL = 1e-12
ATOL = 1e-14
WRONSKIAN_FLOOR = 1e-12


def _seed(series: FrobeniusSeries, radius: float, precision: int) -> Tuple[complex, complex]:
    """(ξ, ξ') at center + radius; mpmath.mpc above double precision."""
    value = series.evaluate(radius, 0, precision)
    slope = series.derivative().evaluate(radius, 0, precision)
    if precision > 53:
        return value, slope
    return complex(value), complex(slope)


def _continue_on_circle(center: complex, radius: float, coefficient_fns: Sequence[Callable[[complex], complex]],
                        a_fn: Callable[[complex], complex], y0: Sequence[complex], turns: int, nodes: int,
                        rtol: float, atol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Continue solutions of ξ'' + a ξ' + b_k ξ = 0 along z = center + radius·e^{iθ}.

    y0 holds (ξ, ξ') pairs, one pair per entry of coefficient_fns.
    Returns the node angles and one state row per node.
    """
    span = 2 * math.pi * turns
    thetas = span * np.arange(nodes) / nodes

    def rhs(theta, y):
        w = radius * cmath.exp(1j * theta)
        z = center + w
        dz = 1j * w
        a = a_fn(z)
        out = np.empty_like(y)
        for k, b_fn in enumerate(coefficient_fns):
            xi, dxi = y[2 * k], y[2 * k + 1]
            out[2 * k] = dxi * dz
            out[2 * k + 1] = (-a * dxi - b_fn(z) * xi) * dz
        return out

    solution = solve_ivp(rhs, (0.0, span), np.asarray(y0, dtype=complex), method="DOP853",
                         t_eval=thetas, rtol=rtol, atol=atol)
    if not solution.success:
        raise StepFailure(solution.message, float(solution.t[-1]) if len(solution.t) else 0.0)
    return thetas, solution.y.T


def _continue_on_circle_mp(center, radius, coefficient_fns: Sequence[Callable], a_fn: Callable,
                           y0: Sequence, turns: int, nodes: int) -> Tuple[list, list]:
    """
    Same continuation as _continue_on_circle with mpmath's Taylor integrator.

    Runs at the active mpmath precision. odefun works over the reals, so
    every complex state is carried as its real and imaginary parts.
    """
    center, radius = mpmath.mpc(center), mpmath.mpf(radius)
    span = 2 * mpmath.pi * turns
    thetas = [span * k / nodes for k in range(nodes)]
    i = mpmath.mpc(0, 1)

    def rhs(theta, y):
        w = radius * mpmath.expj(theta)
        z = center + w
        dz = i * w
        a = a_fn(z)
        b_values = {}
        out = []
        for k, b_fn in enumerate(coefficient_fns):
            if b_fn not in b_values:
                b_values[b_fn] = b_fn(z)
            b = b_values[b_fn]
            xi = mpmath.mpc(y[4 * k], y[4 * k + 1])
            dxi = mpmath.mpc(y[4 * k + 2], y[4 * k + 3])
            for value in (dxi * dz, (-a * dxi - b * xi) * dz):
                out.extend((value.real, value.imag))
        return out

    start = []
    for value in y0:
        value = mpmath.mpc(value)
        start.extend((value.real, value.imag))
    solution = mpmath.odefun(rhs, 0, start)

    states = []
    for theta in thetas:
        flat = solution(theta)
        states.append([mpmath.mpc(flat[2 * j], flat[2 * j + 1]) for j in range(len(y0))])
    return thetas, states


def _check_wronskian(pair: Sequence[complex], label: str):
    xi_a, dxi_a, xi_b, dxi_b = pair
    w = xi_a * dxi_b - xi_b * dxi_a
    if abs(w) < WRONSKIAN_FLOOR:
        raise WronskianDegenerate(f"numeric Wronskian of the {label} pair vanishes at the basepoint")


def _trapezoid(values: Sequence[complex], differentials: Sequence[complex], precision: int):
    with mpmath.workprec(precision):
        return mpmath.fsum(mpmath.mpc(v) * mpmath.mpc(d) for v, d in zip(values, differentials))


def _default_radius(center: complex, others: List[complex], fraction: float = RADIUS_FRACTION) -> Tuple[float, float]:
    distance = min((abs(center - o) for o in others), default=1.0)
    return fraction * distance, distance


def contour_components(params: TrapParams, point: str, radius: Optional[float] = None,
                       nodes: int = DEFAULT_NODES, precision: int = 53, order: int = 24,
                       rtol: float = RTOL, atol: float = ATOL,
                       radius_fraction: float = RADIUS_FRACTION) -> Tuple[complex, complex, complex, complex]:
    """
    All four components of X⁻¹f₂ integrated over a double loop about z₁ or z₂.

    The exponents at z₁ and z₂ are {0, ½}, so the products return to
    themselves after two turns; the result is divided by 4πi.

    At 53 bits the solutions are continued with DOP853 in complex128. Above
    that the whole computation runs under mpmath.workprec(precision): the
    seeds take enough series terms for that precision, the continuation uses
    mpmath.odefun and the residues come back as mpmath.mpc.

    Raises:
        PreconditionViolation: For fewer than 64 nodes
        PathThroughSingularity: When the circle reaches halfway to another singular point
        WronskianDegenerate: When the seeded pair is numerically dependent
    """
    if nodes < MIN_NODES:
        raise PreconditionViolation(f"contour quadrature needs at least {MIN_NODES} nodes, got {nodes}")
    nve, tve = build_nve(params), build_tangential_ve(params)
    location = point_location(params, point)
    center = complex(to_complex(location, precision))
    others = [complex(to_complex(p, precision)) for p in nve.finite_singular_points() if p != location]
    default, distance = _default_radius(center, others, radius_fraction)
    radius = default if radius is None else float(radius)
    if radius <= 0 or (others and radius >= distance / 2):
        raise PathThroughSingularity(
            f"radius {radius} around {point} must stay below half the distance {distance} to the next singular point")

    extended = precision > 53
    if extended and others:
        # seed truncation error falls like (radius / distance)^order
        order = max(order, int(precision * math.log(2) / math.log(distance / radius)) + 4)
    normal, tangential = local_bases(params, point, order)

    a_fn, b_normal = nve.numeric(precision)
    _, b_tangential = tve.numeric(precision)
    first_terms, second_terms = source_terms(params)
    k_mixed = first_terms[0].coefficient.numeric(precision)
    k_normal = second_terms[0].coefficient.numeric(precision)
    k_tangential = second_terms[1].coefficient.numeric(precision)
    coefficient_fns = (b_normal, b_normal, b_tangential, b_tangential)

    with mpmath.workprec(precision):
        seeds = []
        for series in (normal.first, normal.second, tangential.first, tangential.second):
            seeds.extend(_seed(series, radius, precision))
        _check_wronskian(seeds[:4], "normal")
        _check_wronskian(seeds[4:], "tangential")

        if extended:
            center = to_complex(location, precision)
            thetas, states = _continue_on_circle_mp(center, radius, coefficient_fns, a_fn, seeds, 2, 2 * nodes)
            exp_i = mpmath.expj
            i = mpmath.mpc(0, 1)
        else:
            thetas, states = _continue_on_circle(center, radius, coefficient_fns, a_fn, seeds, 2, 2 * nodes,
                                                 rtol, atol)
            exp_i = lambda theta: cmath.exp(1j * theta)
            i = 1j

        columns = ([], [], [], [])
        differentials = []
        for theta, y in zip(thetas, states):
            w = radius * exp_i(theta)
            z = center + w
            x11a, x11b, x12a, x12b = y[0], y[2], y[4], y[6]
            k21 = k_mixed(z) * x11b * x12b
            k22 = k_normal(z) * x11b ** 2 + k_tangential(z) * x12b ** 2
            for column, value in zip(columns, (-x11b * k21, x11a * k21, -x12b * k22, x12a * k22)):
                column.append(value)
            differentials.append(i * w)

        # 4π / nodes per node, over 4πi
        scale = 1 / (i * len(thetas))
        sums = (_trapezoid(column, differentials, precision) * scale for column in columns)
        residues = tuple(+value if extended else complex(value) for value in sums)
    logger.debug("contour residues at %s (radius %.3g, %d bits): %s", point, radius, precision, residues)
    return residues


def contour_residue(params: TrapParams, point: str, component: int, radius: Optional[float] = None,
                    nodes: int = DEFAULT_NODES, precision: int = 53, **kwargs) -> complex:
    """Numeric residue of component 1-4 at z₁ or z₂."""
    if component not in (1, 2, 3, 4):
        raise PreconditionViolation(f"component must be 1-4, got {component}")
    return contour_components(params, point, radius, nodes, precision, **kwargs)[component - 1]


def lame_contour_residue(params: TrapParams, radius: Optional[float] = None, nodes: int = DEFAULT_NODES,
                         precision: int = 53, order: int = 24, rtol: float = RTOL, atol: float = ATOL) -> complex:
    """
    Numeric residue at t = 0 of D·ξ₁₁⁽²⁾ξ₁₂⁽²⁾ξ₁₁⁽²⁾ in the Lamé variable.

    ℘ is carried along through ℘'' = 6℘² − g₂/2 next to the two solutions;
    every exponent is an integer, so one turn closes the loop.
    """
    if nodes < MIN_NODES:
        raise PreconditionViolation(f"contour quadrature needs at least {MIN_NODES} nodes, got {nodes}")
    data = lame_reduce(params, order=order)
    g2 = float(params.B ** 2 / 3)
    N = float(4 * params.D / params.C)
    shift = float(N * params.B / 6 - 2 * params.A)
    if radius is None:
        radius = min(1.0, RADIUS_FRACTION * math.pi * math.sqrt(2 / abs(float(params.B))))
    normal, tangential = lame_local_bases(params, order)
    seeds = [complex(v) for v in (*_seed(data.wp_series, radius, precision),
                                  *_seed(normal.second, radius, precision),
                                  *_seed(tangential.second, radius, precision))]

    def rhs(theta, y):
        dt = 1j * radius * cmath.exp(1j * theta)
        wp, dwp, x11, dx11, x12, dx12 = y
        return np.array([dwp, 6 * wp ** 2 - g2 / 2, dx11, (N * wp + shift) * x11, dx12, 12 * wp * x12]) * dt

    thetas = 2 * math.pi * np.arange(nodes) / nodes
    solution = solve_ivp(rhs, (0.0, 2 * math.pi), np.asarray(seeds, dtype=complex), method="DOP853",
                         t_eval=thetas, rtol=rtol, atol=atol)
    if not solution.success:
        raise StepFailure(solution.message, float(solution.t[-1]) if len(solution.t) else 0.0)

    D = float(params.D)
    values = [D * y[2] ** 2 * y[4] for y in solution.y.T]
    differentials = [1j * radius * cmath.exp(1j * theta) for theta in thetas]
    return complex(_trapezoid(values, differentials, precision)) / (nodes * 1j)


def series_vs_numeric(ode: FuchsODE, series: FrobeniusSeries, eval_radius: float, nodes: int = MIN_NODES,
                      precision: int = 53, rtol: float = RTOL, atol: float = ATOL) -> float:
    """
    Largest relative gap between a local series and the numerically continued solution.

    The solution is seeded from the series at half the radius, carried radially
    out to eval_radius and then once around the circle, and compared to the
    series on the same branch at every node.

    Raises:
        PathThroughSingularity: When the circle reaches halfway to another singular point
    """
    if series.at_infinity:
        raise PreconditionViolation("series_vs_numeric works at finite expansion points")
    location = series.expansion_point
    center = complex(to_complex(location, precision))
    others = [complex(to_complex(p, precision)) for p in ode.finite_singular_points() if p != location]
    if eval_radius <= 0 or (others and eval_radius > min(abs(center - o) for o in others) / 2):
        raise PathThroughSingularity(f"evaluation radius {eval_radius} is too close to another singular point")
    a_fn, b_fn = ode.numeric()

    def radial(s, y):
        z = center + s
        return np.array([y[1], -a_fn(z) * y[1] - b_fn(z) * y[0]])

    start = eval_radius / 2
    leg = solve_ivp(radial, (start, eval_radius), np.asarray([complex(v) for v in _seed(series, start, precision)]),
                    method="DOP853", rtol=rtol, atol=atol)
    if not leg.success:
        raise StepFailure(leg.message, float(leg.t[-1]))
    thetas, states = _continue_on_circle(center, eval_radius, (b_fn,), a_fn, leg.y[:, -1], 1, nodes, rtol, atol)

    worst = 0.0
    for theta, value in zip(thetas, states[:, 0]):
        expected = complex(series.evaluate(eval_radius, theta, precision))
        worst = max(worst, abs(value - expected) / max(abs(expected), 1e-300))
    return worst
