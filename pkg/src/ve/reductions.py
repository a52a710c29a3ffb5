"""Whittaker (C = E = 0) and confluent Heun (C² = 4BE) reductions of the NVE."""

from dataclasses import dataclass
from fractions import Fraction

from exactnum import QuadExt, SqrtClass, format_rational, format_sqrt_class, sqrt_classify
from utils.errors import BranchMismatch
from .params import TrapParams


@dataclass(frozen=True)
class WhittakerData:
    kappa: QuadExt
    mu_squared: Fraction
    mu: SqrtClass

    @property
    def real_branch(self) -> bool:
        """κ is real exactly when B/F > 0 (or D = 0)."""
        return self.kappa.is_rational or self.kappa.d > 0

    def to_dict(self) -> dict:
        return {
            "kappa": str(self.kappa),
            "mu_squared": format_rational(self.mu_squared),
            "mu": format_sqrt_class(self.mu),
            "real_branch": self.real_branch,
        }


@dataclass(frozen=True)
class ConfluentHeunData:
    alpha_squared: Fraction
    eta: Fraction
    delta: Fraction
    beta_squared: Fraction
    gamma_squared: Fraction

    def to_dict(self) -> dict:
        return {
            "alpha_squared": format_rational(self.alpha_squared),
            "eta": format_rational(self.eta),
            "delta": format_rational(self.delta),
            "beta_squared": format_rational(self.beta_squared),
            "gamma_squared": format_rational(self.gamma_squared),
        }


def whittaker_reduce(params: TrapParams) -> WhittakerData:
    """
    κ = −(D/2B)·√(B/F) and μ² = 1/2 + A/B.

    Raises:
        BranchMismatch: Unless C = E = 0 with B, F != 0
    """
    if params.C != 0 or params.E != 0:
        raise BranchMismatch("Whittaker reduction needs C = E = 0")
    if params.B == 0 or params.F == 0:
        raise BranchMismatch("Whittaker reduction needs B != 0 and F != 0")
    kappa = -(params.D / (2 * params.B)) * QuadExt.sqrt(params.B / params.F)
    mu_squared = Fraction(1, 2) + params.A / params.B
    return WhittakerData(kappa, mu_squared, sqrt_classify(mu_squared))


def confluent_heun_reduce(params: TrapParams) -> ConfluentHeunData:
    """
    Constants of the confluent Heun form reached by z = (1 − x)/((C/2B)·x).

    Raises:
        BranchMismatch: Unless C² = 4BE with C != 0
    """
    if params.C == 0:
        raise BranchMismatch("confluent Heun reduction needs C != 0")
    if params.C ** 2 != 4 * params.B * params.E:
        raise BranchMismatch("confluent Heun reduction needs C^2 = 4BE")
    return ConfluentHeunData(
        alpha_squared=Fraction(36),
        eta=Fraction(1, 2) - 2 * params.D / params.C,
        delta=Fraction(0),
        beta_squared=1 + 4 * params.F / params.E,
        gamma_squared=1 + 4 * params.A / params.B,
    )
