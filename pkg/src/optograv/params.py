"""Physical parameters of one cavity-optomechanics configuration.

Units are dimensionless throughout; gamma_b = 1 is the conventional unit
rate of the reference parameter sets.  All rates (gamma_a, gamma_b,
lam) are amplitude-decay rates: the Heisenberg-Langevin equation for a
mode damped at rate gamma reads  d<o>/dt = -gamma <o> + ...,  and the
matching Lindblad dissipator acts with collapse operator sqrt(2*gamma)*o.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .exceptions import InvalidParamsError

# lambda is restricted to {0, kappa} in every analytically covered regime;
# equality is tested against this relative slack.
LAMBDA_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """All physical constants of one configuration.

    omega_b   mechanical frequency
    kappa     coherent optomechanical coupling
    lam       dissipative coupling strength (>= 0); the collective
              dissipator acts on z = i*a'a + b
    gamma_a   cavity amplitude-decay rate
    gamma_b   mechanical amplitude-decay rate
    mass      oscillator mass
    g         gravitational acceleration, the estimand
    eta       single-photon drive amplitude
    chi       two-photon drive amplitude (may be negative)
    upsilon   mechanical parametric-amplification amplitude
    theta_tilt  tilt angle from vertical; gravity couples as cos(theta)
    force_F   compensating force amplitude F = f*sqrt(1/(2 m omega_b))
    """

    omega_b: float
    kappa: float
    lam: float
    gamma_a: float
    gamma_b: float
    mass: float
    g: float
    eta: float = 0.0
    chi: float = 0.0
    upsilon: float = 0.0
    theta_tilt: float = 0.0
    force_F: float = 0.0

    def __post_init__(self):
        if self.gamma_a <= 0 or self.gamma_b <= 0:
            raise InvalidParamsError("dissipation rates must be positive")
        if self.omega_b <= 0:
            raise InvalidParamsError("omega_b must be positive")
        if self.mass <= 0:
            raise InvalidParamsError("mass must be positive")
        if self.lam < 0:
            raise InvalidParamsError("dissipative coupling must be >= 0")

    @property
    def gravity_coupling(self) -> float:
        """G = g*sqrt(m/(2 omega_b)), the displacement drive on the mechanics."""
        return self.g * math.sqrt(self.mass / (2.0 * self.omega_b))

    @property
    def dG_dg(self) -> float:
        """dG/dg = sqrt(m/(2 omega_b)); converts G-uncertainty to g-uncertainty."""
        return math.sqrt(self.mass / (2.0 * self.omega_b))

    @property
    def gravity_coupling_net(self) -> float:
        """Net displacement drive cos(theta)*G - F seen by the mechanics."""
        return math.cos(self.theta_tilt) * self.gravity_coupling - self.force_F

    @property
    def is_nonreciprocal(self) -> bool:
        return math.isclose(self.lam, self.kappa, rel_tol=LAMBDA_MATCH_RTOL, abs_tol=0.0)

    @property
    def is_reciprocal(self) -> bool:
        return self.lam == 0.0

    @property
    def covered_coupling_regime(self) -> bool:
        """True when lambda is one of the two analytically covered values."""
        return self.is_reciprocal or self.is_nonreciprocal

    @classmethod
    def with_gravity_coupling(cls, *, omega_b, kappa, lam, gamma_a, gamma_b,
                              G, g=1.0, **kwargs) -> "SystemParams":
        """Construct with a target G; sets mass = 2*omega_b*(G/g)^2."""
        mass = 2.0 * omega_b * (G / g) ** 2
        return cls(omega_b=omega_b, kappa=kappa, lam=lam, gamma_a=gamma_a,
                   gamma_b=gamma_b, mass=mass, g=g, **kwargs)

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


def gravity_detuning(p: SystemParams) -> float:
    """Displacement-induced cavity detuning of the nonreciprocal steady state.

    Equals -2*kappa*(beta + beta*) at the nonreciprocal mean-field beta:
    4*(cos(theta)*G - F)*kappa*omega_b / ((gamma_b+kappa)^2 + omega_b^2).
    Without tilt or force this is the usual 4*G*kappa*omega_b/(...) factor.
    """
    Gnet = p.gravity_coupling_net
    return 4.0 * Gnet * p.kappa * p.omega_b / ((p.gamma_b + p.kappa) ** 2 + p.omega_b ** 2)


def gravity_detuning_slope(p: SystemParams) -> float:
    """d(gravity_detuning)/dg at fixed compensating force."""
    dGnet = math.cos(p.theta_tilt) * p.dG_dg
    return 4.0 * dGnet * p.kappa * p.omega_b / ((p.gamma_b + p.kappa) ** 2 + p.omega_b ** 2)


def two_photon_critical(p: SystemParams) -> float:
    """Two-photon drive amplitude at which the nonreciprocal cavity sector
    loses stability: sqrt((gamma_a+kappa)^2 + detuning^2)."""
    return math.hypot(p.gamma_a + p.kappa, gravity_detuning(p))


def mpa_critical(p: SystemParams) -> float:
    """Parametric-amplification amplitude at which the mechanical sector of
    the nonreciprocal model loses stability.

    The mechanical Langevin block has eigenvalues
    -(gamma_b+lam) +- sqrt(upsilon^2 - omega_b^2), so instability sets in at
    upsilon^2 = (gamma_b+lam)^2 + omega_b^2.  (With lam = kappa and
    gamma_a = gamma_b this coincides with the sqrt((gamma_a+kappa)^2+omega_b^2)
    form used by the reference parameter sets.)
    """
    return math.hypot(p.gamma_b + p.lam, p.omega_b)


def mpa_critical_reciprocal(p: SystemParams) -> float:
    """Reciprocal (lam = 0) mechanical instability threshold."""
    return math.hypot(p.gamma_b, p.omega_b)
