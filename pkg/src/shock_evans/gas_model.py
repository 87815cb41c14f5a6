# coding=utf-8

"""
Ideal-gas closure in the rescaled Lagrangian frame: model parameters, Rankine-Hugoniot endstates,
Mach number and the gas-constant helpers used to pick physically interesting parameter points.

The frame is normalized to shock speed s = -1 with left state v- = 1, u- = 0, so a parameter point
is the triple (Gamma, nu, v+) plus the viscosity mu (1 unless overridden).
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from shock_evans.errors import DegeneracyError, DomainError, PhysicalityError

__docformat__ = 'restructuredtext en'
__all__ = ('ModelParams', 'Endstates', 'GasConstants', 'AIR', 'v_star', 'rankine_hugoniot', 'mach_number',
           'v_plus_for_mach', 'eucken_nu_over_mu', 'prandtl_number', 'nu_over_mu_from_prandtl',
           'gruneisen_from_atoms', 'air_defaults')


def v_star(gruneisen: float) -> float:
    """
    Strong-shock limit of the right specific volume.

    :param gruneisen: Gruneisen constant Gamma = gamma - 1
    :return: Gamma / (Gamma + 2)
    """
    if not gruneisen > 0:
        raise DomainError(f"Gruneisen constant must be positive, got {gruneisen}")
    return gruneisen / (gruneisen + 2.0)


@dataclass(frozen=True)
class ModelParams:
    """
    One shock problem.  ``v_plus`` may be left unset for templates such as :func:`air_defaults`;
    the endstate and profile operations require it.
    """
    gruneisen: float
    nu: float
    mu: float = 1.0
    v_plus: Optional[float] = None

    def __post_init__(self):
        if not self.gruneisen > 0:
            raise DomainError(f"Gruneisen constant must be positive, got {self.gruneisen}")
        if not self.nu > 0:
            raise DomainError(f"heat conduction nu must be positive, got {self.nu}")
        if not self.mu > 0:
            raise DomainError(f"viscosity mu must be positive, got {self.mu}")
        if self.v_plus is not None:
            if self.v_plus > 1.0:
                raise DomainError(f"v_plus must not exceed v_minus = 1, got {self.v_plus}")
            if self.v_plus < self.v_star:
                raise PhysicalityError(f"v_plus={self.v_plus} is below the strong-shock limit v*={self.v_star}")

    @property
    def v_star(self) -> float:
        return v_star(self.gruneisen)

    @property
    def is_strong_shock(self) -> bool:
        return self.v_plus == self.v_star

    def with_v_plus(self, v_plus: float) -> 'ModelParams':
        return replace(self, v_plus=v_plus)

    def require_v_plus(self) -> float:
        if self.v_plus is None:
            raise DomainError("v_plus is required for this operation")
        return self.v_plus

    def require_noncharacteristic(self) -> float:
        """
        :return: v_plus, after rejecting the characteristic point v_plus = 1
        """
        v_plus = self.require_v_plus()
        if v_plus >= 1.0:
            raise DegeneracyError("characteristic limit v_plus = 1: endstates are not hyperbolic")
        return v_plus

    def normalized(self) -> 'ModelParams':
        """
        Rescale x so that mu = 1.  Only nu/mu enters the stability problem; eigenvalues scale by 1/mu,
        which leaves the winding number unchanged.
        """
        if self.mu == 1.0:
            return self
        return replace(self, nu=self.nu / self.mu, mu=1.0)

    def key(self) -> str:
        return f"g{self.gruneisen:.17g}_n{self.nu:.17g}_m{self.mu:.17g}_v{self.v_plus:.17g}"


@dataclass(frozen=True)
class Endstates:
    gruneisen: float
    v_plus: float
    u_plus: float
    e_minus: float
    e_plus: float
    v_star: float
    v_minus: float = field(default=1.0)
    u_minus: float = field(default=0.0)

    def jump_residuals(self) -> Tuple[float, float, float]:
        """
        Residuals of the mass, momentum and energy jump conditions for s = -1.
        """
        g = self.gruneisen
        mass = self.v_plus - self.v_minus - (self.u_plus - self.u_minus)
        momentum = self.u_plus - self.u_minus + g * (self.e_plus / self.v_plus - self.e_minus / self.v_minus)
        energy = ((self.e_plus - self.e_minus) + (self.u_plus ** 2 - self.u_minus ** 2) / 2.0
                  + g * (self.e_plus * self.u_plus / self.v_plus - self.e_minus * self.u_minus / self.v_minus))
        return mass, momentum, energy

    @property
    def energy_ratio(self) -> float:
        """e+/e-, infinite in the strong-shock limit."""
        if self.e_minus == 0.0:
            return math.inf
        return self.e_plus / self.e_minus

    @property
    def minus(self) -> Tuple[float, float]:
        return self.v_minus, self.e_minus

    @property
    def plus(self) -> Tuple[float, float]:
        return self.v_plus, self.e_plus


def rankine_hugoniot(params: ModelParams) -> Endstates:
    """
    Rescaled endstates for the parameter point.

    :param params: parameters with v_plus set
    :return: the endstates; e_minus is exactly zero at v_plus = v*
    """
    v_plus = params.require_v_plus()
    g = params.gruneisen
    vs = params.v_star
    denominator = 2.0 * g * (g + 1.0)
    e_minus = 0.0 if v_plus == vs else (g + 2.0) * (v_plus - vs) / denominator
    e_plus = v_plus * (g + 2.0 - g * v_plus) / denominator
    return Endstates(gruneisen=g, v_plus=v_plus, u_plus=v_plus - 1.0, e_minus=e_minus, e_plus=e_plus, v_star=vs)


def mach_number(params: ModelParams) -> float:
    """
    Mach number of the shock relative to the left state.

    :return: sqrt(2)/sqrt((Gamma+2)(v+ - v*)), or math.inf at the strong-shock limit
    """
    v_plus = params.require_v_plus()
    if v_plus == params.v_star:
        return math.inf
    if v_plus == 1.0:
        # (Gamma+2)(1-v*) = 2
        return 1.0
    g = params.gruneisen
    return math.sqrt(2.0) / math.sqrt((g + 2.0) * v_plus - g)


def v_plus_for_mach(gruneisen: float, mach: float) -> float:
    """
    Inverse of :func:`mach_number` at fixed Gamma.
    """
    if not mach >= 1.0:
        raise DomainError(f"Mach number must be at least 1, got {mach}")
    if math.isinf(mach):
        return v_star(gruneisen)
    return v_star(gruneisen) + 2.0 / ((gruneisen + 2.0) * mach ** 2)


def eucken_nu_over_mu(gamma: float) -> float:
    """
    nu/mu from Eucken's Prandtl number prediction.

    :param gamma: adiabatic index, 1 <= gamma
    """
    if not gamma >= 1.0:
        raise DomainError(f"adiabatic index must be at least 1, got {gamma}")
    return 0.75 * (9.0 * gamma - 5.0) / 4.0


def prandtl_number(gamma: float) -> float:
    """Eucken's prediction Pr = 4 gamma / (9 gamma - 5)."""
    if not gamma >= 1.0:
        raise DomainError(f"adiabatic index must be at least 1, got {gamma}")
    return 4.0 * gamma / (9.0 * gamma - 5.0)


def nu_over_mu_from_prandtl(gamma: float, prandtl: float) -> float:
    """
    nu/mu = (3/4) gamma / Pr, taking the longitudinal viscosity as (4/3) times the dynamic one.
    """
    if not prandtl > 0:
        raise DomainError(f"Prandtl number must be positive, got {prandtl}")
    return 0.75 * gamma / prandtl


def gruneisen_from_atoms(n_atoms: int) -> float:
    """
    Gamma = 2/(2n+1) for a tree-structured molecule of n atoms (gamma = (2n+3)/(2n+1)).
    """
    if n_atoms < 1:
        raise DomainError(f"atom count must be positive, got {n_atoms}")
    return 2.0 / (2.0 * n_atoms + 1.0)


@dataclass(frozen=True)
class GasConstants:
    """Dimensional constants in SI units."""
    gas_constant: float
    c_v: float
    conductivity: float
    dynamic_viscosity: float

    @property
    def gruneisen(self) -> float:
        return self.gas_constant / self.c_v

    @property
    def prandtl_v(self) -> float:
        """Constant-volume Prandtl number c_v mu_1 / kappa."""
        return self.c_v * self.dynamic_viscosity / self.conductivity

    @property
    def nu_over_mu(self) -> float:
        return 0.75 / self.prandtl_v


AIR = GasConstants(gas_constant=287.05, c_v=716.0, conductivity=0.025, dynamic_viscosity=1.78e-5)


def air_defaults() -> ModelParams:
    """
    Parameters modeling air.  v_plus is left unset.
    """
    return ModelParams(gruneisen=0.4, nu=1.47, mu=1.0)
