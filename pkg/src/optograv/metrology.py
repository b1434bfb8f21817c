"""Homodyne signal, measurement noise, and gravimetric uncertainty.

The measured quadrature is fixed to M = a + a'.  Signals are reported as
|d<M>/dg| obtained by direct differentiation of the steady amplitude; the
uncertainty follows the error-propagation contract
delta_g = sqrt(var M) / |d<M>/dg| with var M = 1 + 2<da'da> + 2 Re<da da>.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import InvalidParamsError, NoSteadyStateError
from .fluctuations import (build_drift, homodyne_variance, steady_covariance)
from .mean_field import (MeanFieldState, Regime, steady_state)
from .params import (SystemParams, gravity_detuning, gravity_detuning_slope)

# Closed forms derived under kappa*|alpha|^2 << G are withheld past this ratio.
VALIDITY_RATIO_MAX = 0.1

_ANALYTIC_REGIMES = (Regime.NONRECIPROCAL_SINGLE, Regime.RECIPROCAL_SINGLE,
                     Regime.NONRECIPROCAL_TWO_PHOTON, Regime.NONRECIPROCAL_MPA)


class Provenance(enum.Enum):
    ANALYTIC = "analytic"
    LINEARIZED_NUMERIC = "linearized-numeric"
    ORACLE_NUMERIC = "oracle-numeric"


@dataclass(frozen=True)
class MetrologyReport:
    signal: float
    noise_var: float
    delta_g: float
    regime: Regime
    provenance: Provenance
    validity_ratio: float
    closed_forms: dict | None = None
    mean_field: MeanFieldState | None = None

    @property
    def delta_G(self) -> float:
        """Uncertainty on the displacement coupling G = g*sqrt(m/2 omega_b)."""
        return self.delta_g * self._dG_dg

    _dG_dg: float = 1.0


def assemble_report(signal: float, noise_var: float, *, regime, provenance,
                    validity_ratio, dG_dg, closed_forms=None,
                    mean_field=None) -> MetrologyReport:
    if signal <= 0.0 or not math.isfinite(signal):
        raise InvalidParamsError("degenerate estimand: susceptibility vanishes")
    return MetrologyReport(signal=signal, noise_var=noise_var,
                           delta_g=math.sqrt(noise_var) / signal,
                           regime=regime, provenance=provenance,
                           validity_ratio=validity_ratio,
                           closed_forms=closed_forms, mean_field=mean_field,
                           _dG_dg=dG_dg)


def mean_homodyne(p: SystemParams, regime: Regime) -> float:
    """Steady <M> = 2 Re alpha."""
    return 2.0 * steady_state(p, regime).alpha.real


def _mpa_detuning_slope(p: SystemParams) -> float:
    """d/dg of the MPA-regime cavity detuning at fixed force."""
    det_b = (p.gamma_b + p.lam) ** 2 + p.omega_b ** 2 - p.upsilon ** 2
    dGnet = math.cos(p.theta_tilt) * p.dG_dg
    return 4.0 * dGnet * p.kappa * (p.upsilon - p.omega_b) / det_b


def susceptibility_analytic(p: SystemParams, regime: Regime) -> float:
    """|d<M>/dg| by direct differentiation of the steady amplitude."""
    if regime is Regime.NONRECIPROCAL_SINGLE:
        th = gravity_detuning(p)
        dth = gravity_detuning_slope(p)
        D = (p.gamma_a + p.kappa) ** 2 + th ** 2
        return abs(-2.0 * p.eta * dth * (D - 2.0 * th ** 2) / D ** 2)

    if regime is Regime.NONRECIPROCAL_TWO_PHOTON:
        th = gravity_detuning(p)
        dth = gravity_detuning_slope(p)
        den = (p.gamma_a + p.kappa) ** 2 + th ** 2 - p.chi ** 2
        return abs(-2.0 * p.eta * dth * (den + 2.0 * th * (p.chi - th)) / den ** 2)

    if regime is Regime.NONRECIPROCAL_MPA:
        mf = steady_state(p, regime)
        phase = mf.detuning
        slope = _mpa_detuning_slope(p)
        D = (p.gamma_a + p.kappa) ** 2 + phase ** 2
        return abs(2.0 * p.eta * slope * (D - 2.0 * phase ** 2) / D ** 2)

    if regime is Regime.RECIPROCAL_SINGLE:
        mf = steady_state(p, regime)
        x = mf.photon_number
        w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
        Gn = p.gravity_coupling_net
        S = mf.detuning
        # implicit differentiation of the cubic x*(ga^2 + S(x,G)^2) = eta^2
        shift = p.kappa * x - Gn
        den = p.gamma_a ** 2 + w ** 2 * shift ** 2 + 2.0 * x * w ** 2 * p.kappa * shift
        dx_dG = 2.0 * x * w ** 2 * shift / den
        dGnet = math.cos(p.theta_tilt) * p.dG_dg
        dS_dg = w * (p.kappa * dx_dG - 1.0) * dGnet
        ga2 = p.gamma_a ** 2
        return abs(2.0 * p.eta * (ga2 - S ** 2) / (ga2 + S ** 2) ** 2 * dS_dg)

    raise InvalidParamsError(
        f"no analytic susceptibility for {regime}; use finite differences")


def susceptibility_finite_difference(p: SystemParams, regime: Regime,
                                     rel_step: float = 1e-6) -> float:
    """Central difference of <M> through the full mean-field solve."""
    h = rel_step * max(abs(p.g), 1.0)
    up = mean_homodyne(p.replace(g=p.g + h), regime)
    dn = mean_homodyne(p.replace(g=p.g - h), regime)
    return abs((up - dn) / (2.0 * h))


def susceptibility(p: SystemParams, regime: Regime, method: str = "auto") -> float:
    if method == "analytic":
        return susceptibility_analytic(p, regime)
    if method == "finite_difference":
        return susceptibility_finite_difference(p, regime)
    if method == "auto":
        if regime in _ANALYTIC_REGIMES:
            return susceptibility_analytic(p, regime)
        return susceptibility_finite_difference(p, regime)
    raise InvalidParamsError(f"unknown susceptibility method {method!r}")


def validity_ratio(p: SystemParams, mf: MeanFieldState) -> float:
    """kappa*|alpha|^2 relative to the gravitational displacement drive."""
    Gn = abs(p.gravity_coupling_net)
    if Gn == 0.0:
        return math.inf
    return p.kappa * mf.photon_number / Gn


# ---------------------------------------------------------------------------
# closed forms (small-coupling validity regime, direct-derivative convention)

def delta_g_closed_nonreciprocal(p: SystemParams) -> float:
    """Vacuum-noise uncertainty of the nonreciprocal single-photon scheme in
    the small-coupling regime: g*(gamma_a^2 + theta^2) / (2 eta theta)."""
    th = gravity_detuning(p)
    return p.g * (p.gamma_a ** 2 + th ** 2) / (2.0 * p.eta * th)


def delta_g_closed_reciprocal(p: SystemParams) -> float:
    """Reciprocal counterpart, exactly twice the nonreciprocal value."""
    th = gravity_detuning(p)
    return p.g * (p.gamma_a ** 2 + th ** 2) / (p.eta * th)


def zeta_infinite_drive(p: SystemParams) -> float:
    """Strong-drive photon-fluctuation coefficient <da'da>/|alpha|^2 in its
    expanded algebraic form (exact when omega_b dominates the rates)."""
    k, ga, gb = p.kappa, p.gamma_a, p.gamma_b
    th = gravity_detuning(p)
    w2 = (2 * k + ga + gb) ** 2 + (p.omega_b + th) ** 2
    num = k * ((k + gb) * w2 + 4 * k * (k + gb) * (2 * k + ga + gb)
               + 8 * k ** 2 * (2 * k + ga + gb))
    return num / ((k + ga) * (k + gb) * w2)


def delta_g_saturation_nonreciprocal(p: SystemParams) -> float:
    """Strong-drive limit of the nonreciprocal uncertainty.

    Both noise contributions grow as eta^2 while the signal grows as eta, so
    delta_g saturates at
        sqrt(2*zeta/D + 2*Re(lam/pc^3)) * D^2 / (2*theta' * (D - 2 theta^2))
    with pc = gamma_a + lam + i*theta, D = (gamma_a+kappa)^2 + theta^2 and
    theta' = d theta/dg.  The pair-correlator term is kept: dropping it
    underestimates the saturated noise by about a factor two."""
    th = gravity_detuning(p)
    dth = gravity_detuning_slope(p)
    D = (p.gamma_a + p.kappa) ** 2 + th ** 2
    pc = p.gamma_a + p.lam + 1j * th
    var_rate = 2.0 * zeta_infinite_drive(p) / D + 2.0 * (p.lam / pc ** 3).real
    return math.sqrt(var_rate) * D ** 2 / (2.0 * dth * (D - 2.0 * th ** 2))


# ---------------------------------------------------------------------------
# reports

def uncertainty(p: SystemParams, regime: Regime) -> MetrologyReport:
    """Full uncertainty report: analytic signal where available, Lyapunov
    noise, validity diagnostics, and the applicable closed forms.

    Closed forms are withheld when kappa*|alpha|^2 exceeds
    VALIDITY_RATIO_MAX times the displacement drive; numeric values are
    still returned.  Raises NoSteadyStateError past a critical point and
    InvalidParamsError for a degenerate estimand (zero signal)."""
    mf = steady_state(p, regime)
    ls = build_drift(p, mf)
    if not ls.stable:
        raise NoSteadyStateError("fluctuations unstable: no steady noise")
    mom = steady_covariance(ls)
    noise = homodyne_variance(mom)
    sig = susceptibility(p, regime)
    ratio = validity_ratio(p, mf)

    closed = None
    if ratio <= VALIDITY_RATIO_MAX and regime in (Regime.NONRECIPROCAL_SINGLE,
                                                  Regime.RECIPROCAL_SINGLE):
        if regime is Regime.NONRECIPROCAL_SINGLE:
            closed = {"delta_g_small_coupling": delta_g_closed_nonreciprocal(p)}
        else:
            closed = {"delta_g_small_coupling": delta_g_closed_reciprocal(p)}
    if regime is Regime.NONRECIPROCAL_SINGLE:
        closed = dict(closed or {})
        closed["delta_g_saturation"] = delta_g_saturation_nonreciprocal(p)

    return assemble_report(sig, noise, regime=regime,
                           provenance=Provenance.LINEARIZED_NUMERIC,
                           validity_ratio=ratio, dG_dg=p.dG_dg,
                           closed_forms=closed, mean_field=mf)


def regime_ratio(p: SystemParams) -> tuple[float, MetrologyReport, MetrologyReport]:
    """delta_g(nonreciprocal) / delta_g(reciprocal) at identical parameters,
    with the dissipative coupling toggled kappa <-> 0."""
    if p.g == 0.0 or p.gravity_coupling_net == 0.0:
        raise InvalidParamsError("degenerate estimand: no displacement drive")
    rep_nr = uncertainty(p.replace(lam=p.kappa), Regime.NONRECIPROCAL_SINGLE)
    rep_r = uncertainty(p.replace(lam=0.0), Regime.RECIPROCAL_SINGLE)
    return rep_nr.delta_g / rep_r.delta_g, rep_nr, rep_r
