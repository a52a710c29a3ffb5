"""
Numerical flow of the trap Hamiltonian.

Hamilton's equations come from the symbolic Hamiltonian through sympy and
are integrated either by a fixed-step symplectic composition (leapfrog or
fourth-order Yoshida) or by scipy's adaptive DOP853.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy
from scipy.integrate import solve_ivp

from utils.config_loader import get_contour_settings, get_integrator_config
from utils.errors import NoCrossingFound, PreconditionViolation, StepFailure
from utils.logger import get_logger
from ve import PARAMETER_NAMES, TrapParams

logger = get_logger(__name__)

R, PR, Z, PZ = sympy.symbols("r p_r z p_z", real=True)
STATE_COLUMNS = ("t", "r", "p_r", "z", "p_z")
CSV_FLOAT_FORMAT = "%.17g"

# Yoshida fourth-order composition of leapfrog
_CBRT2 = 2.0 ** (1.0 / 3.0)
_W1 = 1.0 / (2.0 - _CBRT2)
_W0 = -_CBRT2 * _W1
YOSHIDA_DRIFT = (_W1 / 2, (_W0 + _W1) / 2, (_W0 + _W1) / 2, _W1 / 2)
YOSHIDA_KICK = (_W1, _W0, _W1, 0.0)
LEAPFROG_DRIFT = (0.5, 0.5)
LEAPFROG_KICK = (1.0, 0.0)

SCHEMES = {
    "yoshida4": (YOSHIDA_DRIFT, YOSHIDA_KICK),
    "leapfrog": (LEAPFROG_DRIFT, LEAPFROG_KICK),
}


@dataclass(frozen=True)
class IntegratorConfig:
    """
    method: "symplectic" (fixed step) or "adaptive" (DOP853).
    """

    method: str = "symplectic"
    scheme: str = "yoshida4"
    step: float = 1e-3
    rtol: float = 1e-12
    atol: float = 1e-14
    max_step: float = 1e-2
    section_tolerance: float = 1e-10
    time_budget: float = 1e4

    def __post_init__(self):
        if self.method not in ("symplectic", "adaptive"):
            raise PreconditionViolation(f"unknown integration method {self.method!r}")
        if self.scheme not in SCHEMES:
            raise PreconditionViolation(f"unknown symplectic scheme {self.scheme!r}")
        for name in ("step", "rtol", "atol", "max_step", "section_tolerance", "time_budget"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise PreconditionViolation(f"{name} must be positive, got {value!r}")

    @classmethod
    def from_config(cls, config: Dict[str, Any], **overrides) -> "IntegratorConfig":
        simulation = get_integrator_config(config)
        numerics = get_contour_settings(config)
        values = {
            "method": simulation.get("method", cls.method),
            "scheme": simulation.get("scheme", cls.scheme),
            "step": float(simulation.get("step", cls.step)),
            "rtol": float(numerics.get("rtol", cls.rtol)),
            "atol": float(numerics.get("atol", cls.atol)),
            "max_step": float(simulation.get("max_step", cls.max_step)),
            "section_tolerance": float(simulation.get("section_tolerance", cls.section_tolerance)),
            "time_budget": float(simulation.get("time_budget", cls.time_budget)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def hamiltonian_expression(params: TrapParams) -> sympy.Expr:
    """H(r, p_r, z, p_z) with the exact rational coefficients."""
    A, B, C, D, E, F, G = (sympy.Rational(v.numerator, v.denominator) for v in params.as_tuple())
    return ((PR ** 2 + PZ ** 2) / 2 + A * R ** 2 + B * Z ** 2 + C * Z ** 3 + D * R ** 2 * Z
            + E * Z ** 4 + F * R ** 2 * Z ** 2 + G * R ** 4)


class HamiltonianFlow:
    """Lambdified energy and forces of the trap Hamiltonian."""

    def __init__(self, params: TrapParams):
        self.params = params
        H = hamiltonian_expression(params)
        self.expression = H
        self._energy = sympy.lambdify((R, PR, Z, PZ), H, "numpy")
        self._force_r = sympy.lambdify((R, Z), -sympy.diff(H, R), "numpy")
        self._force_z = sympy.lambdify((R, Z), -sympy.diff(H, Z), "numpy")

    def energy(self, state: Sequence[float]) -> float:
        r, p_r, z, p_z = state
        return float(self._energy(r, p_r, z, p_z))

    def energies(self, states: np.ndarray) -> np.ndarray:
        values = self._energy(states[:, 0], states[:, 1], states[:, 2], states[:, 3])
        return np.broadcast_to(np.asarray(values, dtype=float), (states.shape[0],)).copy()

    def forces(self, r: float, z: float) -> Tuple[float, float]:
        return float(self._force_r(r, z)), float(self._force_z(r, z))

    def vector_field(self, t: float, y: np.ndarray) -> np.ndarray:
        r, p_r, z, p_z = y
        f_r, f_z = self.forces(r, z)
        return np.array([p_r, f_r, p_z, f_z])

    def symplectic_step(self, state: np.ndarray, dt: float, scheme: str = "yoshida4") -> np.ndarray:
        """One drift-kick composition step of size dt."""
        drifts, kicks = SCHEMES[scheme]
        r, p_r, z, p_z = state
        for drift, kick in zip(drifts, kicks):
            r += drift * dt * p_r
            z += drift * dt * p_z
            if kick:
                f_r, f_z = self.forces(r, z)
                p_r += kick * dt * f_r
                p_z += kick * dt * f_z
        return np.array([r, p_r, z, p_z])

    def advance(self, state: np.ndarray, dt: float, config: IntegratorConfig) -> np.ndarray:
        if config.method == "symplectic":
            return self.symplectic_step(state, dt, config.scheme)
        solution = solve_ivp(self.vector_field, (0.0, dt), state, method="DOP853",
                             rtol=config.rtol, atol=config.atol, max_step=config.max_step)
        if not solution.success:
            raise StepFailure(solution.message, float(solution.t[-1]))
        return solution.y[:, -1]


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray

    @property
    def samples(self) -> List[Tuple[float, float, float, float, float]]:
        return [(float(t), *map(float, s)) for t, s in zip(self.times, self.states)]

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energies - self.energies[0])))

    def drift_until(self, t: float) -> float:
        mask = self.times <= t
        return float(np.max(np.abs(self.energies[mask] - self.energies[0])))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=list(STATE_COLUMNS[1:]))
        frame.insert(0, "t", self.times)
        frame["energy"] = self.energies
        return frame

    def write_csv(self, path: str):
        self.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def _initial_state(initial_state: Sequence[float]) -> np.ndarray:
    state = np.asarray(initial_state, dtype=float)
    if state.shape != (4,) or not np.all(np.isfinite(state)):
        raise PreconditionViolation(f"initial state must be four finite numbers, got {initial_state!r}")
    return state


def integrate_flow(params: TrapParams, initial_state: Sequence[float], t_max: float,
                   config: Optional[IntegratorConfig] = None, sample_every: int = 1) -> Trajectory:
    """
    Integrate (r, p_r, z, p_z) from t = 0 to t_max.

    Args:
        params: Trap coefficients
        initial_state: (r, p_r, z, p_z)
        t_max: Final time
        config: Integrator settings; defaults to Yoshida-4 with step 1e-3
        sample_every: Keep every k-th fixed step in the trajectory

    Raises:
        StepFailure: On non-finite states or a failed adaptive step
    """
    config = config or IntegratorConfig()
    state = _initial_state(initial_state)
    flow = HamiltonianFlow(params)

    if config.method == "adaptive":
        solution = solve_ivp(flow.vector_field, (0.0, t_max), state, method="DOP853",
                             rtol=config.rtol, atol=config.atol, max_step=config.max_step)
        if not solution.success:
            raise StepFailure(solution.message, float(solution.t[-1]))
        states = solution.y.T
        return Trajectory(solution.t, states, flow.energies(states))

    n_steps = max(1, int(math.ceil(t_max / config.step)))
    dt = t_max / n_steps
    times, states = [0.0], [state]
    for k in range(1, n_steps + 1):
        new_state = flow.symplectic_step(state, dt, config.scheme)
        if not np.all(np.isfinite(new_state)):
            raise StepFailure("non-finite state", (k - 1) * dt)
        state = new_state
        if k % sample_every == 0 or k == n_steps:
            times.append(k * dt)
            states.append(state)
    states_array = np.array(states)
    trajectory = Trajectory(np.array(times), states_array, flow.energies(states_array))
    logger.debug("integrated %d steps, energy drift %.3e", n_steps, trajectory.energy_drift)
    return trajectory


def energy_drift_profile(trajectory: Trajectory) -> Dict[str, float]:
    """Energy drift over [0, T/2] and [0, T]."""
    t_end = float(trajectory.times[-1])
    return {"half": trajectory.drift_until(t_end / 2), "full": trajectory.energy_drift}


def _potential_on_section(params: TrapParams, r: float) -> float:
    return float(params.A) * r ** 2 + float(params.G) * r ** 4


def _locate_crossing(flow: HamiltonianFlow, state: np.ndarray, dt: float, config: IntegratorConfig) -> np.ndarray:
    """Bisect the sub-step τ ∈ [0, dt] until |z| ≤ section tolerance."""
    low, high = 0.0, dt
    crossing = flow.advance(state, dt, config)
    for _ in range(200):
        if abs(crossing[2]) <= config.section_tolerance:
            break
        middle = (low + high) / 2
        crossing = flow.advance(state, middle, config)
        if crossing[2] < 0:
            low = middle
        else:
            high = middle
    return crossing


def poincare_section(params: TrapParams, energy: float, n_crossings: int,
                     config: Optional[IntegratorConfig] = None,
                     start: Tuple[float, float] = (0.0, 0.0)) -> List[Tuple[float, float]]:
    """
    Crossings of z = 0 with p_z > 0 on the energy level h, as (r, p_r).

    The orbit starts on the section at (r, p_r) = start with p_z fixed by the
    energy.

    Raises:
        NoCrossingFound: When the start is not on the level or the time budget runs out
    """
    config = config or IntegratorConfig()
    r0, pr0 = start
    kinetic = 2 * (energy - _potential_on_section(params, r0)) - pr0 ** 2
    if kinetic < 0:
        raise NoCrossingFound(f"energy {energy} admits no crossing at start {start}")
    flow = HamiltonianFlow(params)
    state = np.array([r0, pr0, 0.0, math.sqrt(kinetic)])
    points: List[Tuple[float, float]] = []
    t = 0.0
    while len(points) < n_crossings:
        if t > config.time_budget:
            raise NoCrossingFound(f"only {len(points)} of {n_crossings} crossings within t = {config.time_budget}")
        new_state = flow.advance(state, config.step, config)
        if not np.all(np.isfinite(new_state)):
            raise StepFailure("non-finite state", t)
        if state[2] < 0 <= new_state[2] and new_state[3] > 0:
            crossing = _locate_crossing(flow, state, config.step, config)
            points.append((float(crossing[0]), float(crossing[1])))
        state = new_state
        t += config.step
    return points


def radial_energy(params: TrapParams, points: Sequence[Tuple[float, float]]) -> np.ndarray:
    """p_r²/2 + A r² + G r⁴ at each section point; constant when F = D = 0."""
    data = np.asarray(points, dtype=float).reshape(-1, 2)
    r, p_r = data[:, 0], data[:, 1]
    return p_r ** 2 / 2 + float(params.A) * r ** 2 + float(params.G) * r ** 4


def write_section_csv(points: Sequence[Tuple[float, float]], path: str):
    frame = pd.DataFrame(list(points), columns=["r", "p_r"])
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def params_from_row(row: Dict[str, Any]) -> TrapParams:
    """TrapParams from a CSV row of rational strings."""
    values = {name: str(row[name]) for name in PARAMETER_NAMES if name in row}
    if "h" in row and not pd.isna(row["h"]):
        values["h"] = str(row["h"])
    return TrapParams.from_strings(values)
