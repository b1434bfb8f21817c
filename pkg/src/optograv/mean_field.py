"""Mean-field steady states for every drive regime.

The classical amplitudes (alpha, beta) obey

    d<a>/dt = -(gamma_a + lam)*alpha + i(kappa+lam)*alpha*(beta+beta*)
              - i*eta - i*chi*conj(alpha)
    d<b>/dt = -(i*omega_b + gamma_b + lam)*beta + i(kappa-lam)*|alpha|^2
              - i*(cos(theta)*G - F) - i*upsilon*conj(beta)

With lam = kappa the mechanics decouples from the cavity (nonreciprocal);
with lam = 0 the cubic/quintic self-consistency of the reciprocal case
appears through the |alpha|^2 backaction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npoly

from .exceptions import (BeyondCriticalError, InvalidParamsError,
                         NoSteadyStateError)
from .params import (SystemParams, gravity_detuning, mpa_critical,
                     mpa_critical_reciprocal, two_photon_critical)

RESIDUAL_TOL = 1e-10
# Refuse operating points closer to a critical drive than this relative margin.
CRITICAL_MARGIN = 1e-6
_HOMOTOPY_STEPS = 48
_REAL_ROOT_TOL = 1e-8


class Regime(enum.Enum):
    NONRECIPROCAL_SINGLE = "nonreciprocal-single"
    RECIPROCAL_SINGLE = "reciprocal-single"
    NONRECIPROCAL_TWO_PHOTON = "nonreciprocal-two-photon"
    RECIPROCAL_TWO_PHOTON = "reciprocal-two-photon"
    NONRECIPROCAL_MPA = "nonreciprocal-mpa"
    RECIPROCAL_MPA = "reciprocal-mpa"

    @property
    def nonreciprocal(self) -> bool:
        return self.value.startswith("nonreciprocal")


@dataclass(frozen=True)
class MeanFieldState:
    """Steady amplitudes plus the regime and diagnostics that produced them.

    detuning holds the displacement-induced phase factor in the sign
    convention of each regime's cavity response: the single-photon
    nonreciprocal state reads alpha = -i*eta/(gamma_a+kappa + i*detuning)
    with detuning = -2*kappa*(beta+beta*), while the parametric-modulation
    and reciprocal states read alpha = -i*eta/(gamma_eff - i*detuning) with
    detuning = (kappa+lam)*(beta+beta*).  criticality_margin carries the
    distance to the relevant critical point where one exists.
    """
    alpha: complex
    beta: complex
    regime: Regime
    converged: bool
    residual: float
    detuning: float = 0.0
    criticality_margin: float | None = None
    all_roots: tuple = field(default_factory=tuple)
    bistable: bool = False

    @property
    def photon_number(self) -> float:
        return abs(self.alpha) ** 2


def mean_field_rhs(p: SystemParams, alpha: complex, beta: complex) -> tuple[complex, complex]:
    """Right-hand side of the mean-field equations at (alpha, beta)."""
    bb = beta + beta.conjugate()
    fa = (-(p.gamma_a + p.lam) * alpha
          + 1j * (p.kappa + p.lam) * alpha * bb
          - 1j * p.eta
          - 1j * p.chi * alpha.conjugate())
    fb = (-(1j * p.omega_b + p.gamma_b + p.lam) * beta
          + 1j * (p.kappa - p.lam) * abs(alpha) ** 2
          - 1j * p.gravity_coupling_net
          - 1j * p.upsilon * beta.conjugate())
    return fa, fb


def _finish(p, alpha, beta, regime, **extra) -> MeanFieldState:
    fa, fb = mean_field_rhs(p, alpha, beta)
    scale = max(1.0, abs(alpha), abs(beta))
    residual = max(abs(fa), abs(fb)) / scale
    return MeanFieldState(alpha=complex(alpha), beta=complex(beta), regime=regime,
                          converged=residual < RESIDUAL_TOL, residual=residual,
                          **extra)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParamsError(msg)


# ---------------------------------------------------------------------------
# single-photon drive

def steady_nonreciprocal_single(p: SystemParams) -> MeanFieldState:
    """Closed-form steady state at lam = kappa with only the single-photon
    drive (and optionally the static force)."""
    _require(p.is_nonreciprocal, "nonreciprocal regime needs lam == kappa")
    _require(p.chi == 0.0 and p.upsilon == 0.0, "chi and upsilon must vanish here")
    Gnet = p.gravity_coupling_net
    beta = -1j * Gnet / (1j * p.omega_b + p.gamma_b + p.kappa)
    theta = gravity_detuning(p)
    alpha = -1j * p.eta / (p.gamma_a + p.kappa + 1j * theta)
    return _finish(p, alpha, beta, Regime.NONRECIPROCAL_SINGLE, detuning=theta)


def _reciprocal_polynomial(p: SystemParams) -> np.ndarray:
    """Coefficients (ascending) of the cubic in x = |alpha|^2 for lam = 0:
    x*(gamma_a^2 + w^2 (kappa x - Gnet)^2) = eta^2."""
    w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
    Gn = p.gravity_coupling_net
    return np.array([
        -p.eta ** 2,
        p.gamma_a ** 2 + w ** 2 * Gn ** 2,
        -2.0 * w ** 2 * p.kappa * Gn,
        w ** 2 * p.kappa ** 2,
    ])


def _real_nonneg_roots(coeffs: np.ndarray) -> list[float]:
    roots = npoly.polyroots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) < _REAL_ROOT_TOL * max(1.0, abs(r)) and r.real >= -_REAL_ROOT_TOL:
            out.append(max(r.real, 0.0))
    return sorted(out)


def _select_by_homotopy(poly_at, drive: float, pick0: float = 0.0) -> tuple[float, list[float]]:
    """Follow the root branch continuously connected to the undriven solution.

    poly_at(s) must return ascending coefficients at drive value s; the
    branch is tracked over a geometric-ish ramp from ~0 to the full drive.
    """
    x = pick0
    final_roots: list[float] = []
    for k in range(1, _HOMOTOPY_STEPS + 1):
        s = drive * k / _HOMOTOPY_STEPS
        roots = _real_nonneg_roots(poly_at(s))
        if not roots:
            raise NoSteadyStateError("self-consistency lost all real roots")
        x = min(roots, key=lambda r: abs(r - x))
        final_roots = roots
    return x, final_roots


def steady_reciprocal_single(p: SystemParams) -> MeanFieldState:
    """Self-consistent steady state at lam = 0 under the single-photon drive.

    Solves the cubic in the photon number, following the branch connected to
    the undriven solution; all real nonnegative roots are attached and a
    bistable flag is raised when several coexist.
    """
    _require(p.is_reciprocal, "reciprocal regime needs lam == 0")
    _require(p.chi == 0.0 and p.upsilon == 0.0, "chi and upsilon must vanish here")
    w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
    Gn = p.gravity_coupling_net

    def poly_at(eta):
        q = p.replace(eta=eta)
        return _reciprocal_polynomial(q)

    x, roots = _select_by_homotopy(poly_at, p.eta)
    S = w * (p.kappa * x - Gn)
    alpha = -1j * p.eta / (p.gamma_a - 1j * S)
    beta = 1j * (p.kappa * x - Gn) / (1j * p.omega_b + p.gamma_b)
    return _finish(p, alpha, beta, Regime.RECIPROCAL_SINGLE, detuning=S,
                   all_roots=tuple(roots), bistable=len(roots) > 1)


def asymptotic_reciprocal_photon_number(p: SystemParams) -> float:
    """Strong-drive expansion of the reciprocal photon number:
    2*Gnet/(3*kappa) + (eta^2 (gamma_b^2+omega_b^2)^2 / (2 kappa^2 omega_b)^2)^(1/3).

    Exposed for cross-checking the cubic solution at large eta."""
    Gn = p.gravity_coupling_net
    lead = (p.eta ** 2 * (p.gamma_b ** 2 + p.omega_b ** 2) ** 2
            / (2.0 * p.kappa ** 2 * p.omega_b) ** 2) ** (1.0 / 3.0)
    return 2.0 * Gn / (3.0 * p.kappa) + lead


# ---------------------------------------------------------------------------
# two-photon drive

def steady_two_photon(p: SystemParams, regime: Regime) -> MeanFieldState:
    """Steady state with the two-photon drive added to the single-photon one.

    Nonreciprocal: closed form; refuses |chi| within CRITICAL_MARGIN of the
    critical amplitude and raises BeyondCriticalError at or past it.
    Reciprocal: self-consistent quintic, branch-tracked in chi from the
    reciprocal single-photon solution; dynamical stability is checked
    through the drift spectrum.
    """
    _require(p.upsilon == 0.0 and p.force_F == 0.0,
             "two-photon regime excludes MPA and the static force")
    if regime is Regime.NONRECIPROCAL_TWO_PHOTON:
        _require(p.is_nonreciprocal, "nonreciprocal regime needs lam == kappa")
        chi_c = two_photon_critical(p)
        margin = chi_c ** 2 - p.chi ** 2
        if abs(p.chi) >= chi_c * (1.0 - CRITICAL_MARGIN):
            raise BeyondCriticalError(
                f"|chi|={abs(p.chi):g} at or beyond critical point {chi_c:g}: no steady state")
        Gnet = p.gravity_coupling_net
        theta = gravity_detuning(p)
        beta = -1j * Gnet / (1j * p.omega_b + p.gamma_b + p.kappa)
        den = (p.gamma_a + p.kappa) ** 2 + theta ** 2 - p.chi ** 2
        alpha = p.eta * ((p.chi - theta) - 1j * (p.kappa + p.gamma_a)) / den
        return _finish(p, alpha, beta, regime, detuning=theta,
                       criticality_margin=margin)

    if regime is Regime.RECIPROCAL_TWO_PHOTON:
        _require(p.is_reciprocal, "reciprocal regime needs lam == 0")
        return _steady_reciprocal_two_photon(p)
    raise InvalidParamsError(f"{regime} is not a two-photon regime")


def _reciprocal_tp_polynomial(p: SystemParams, chi: float) -> np.ndarray:
    """Quintic (ascending coefficients) in x = |alpha|^2 for lam = 0 with a
    two-photon drive:  x*(ga^2 + S^2 - chi^2)^2 = eta^2*((chi+S)^2 + ga^2),
    S = w*(kappa*x - Gnet)."""
    w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
    Gn = p.gravity_coupling_net
    S = np.array([-w * Gn, w * p.kappa])
    inner = npoly.polyadd(np.array([p.gamma_a ** 2 - chi ** 2]), npoly.polymul(S, S))
    lhs = npoly.polymul(np.array([0.0, 1.0]), npoly.polymul(inner, inner))
    chi_plus_S = npoly.polyadd(np.array([chi]), S)
    rhs = p.eta ** 2 * npoly.polyadd(npoly.polymul(chi_plus_S, chi_plus_S),
                                     np.array([p.gamma_a ** 2]))
    return npoly.polysub(lhs, rhs)


def _tp_amplitudes_from_x(p: SystemParams, chi: float, x: float):
    w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
    Gn = p.gravity_coupling_net
    S = w * (p.kappa * x - Gn)
    den = p.gamma_a ** 2 + S ** 2 - chi ** 2
    alpha = p.eta * ((chi + S) - 1j * p.gamma_a) / den
    beta = 1j * (p.kappa * x - Gn) / (1j * p.omega_b + p.gamma_b)
    return alpha, beta, S, den


def _polish_fixed_point(p: SystemParams, alpha: complex, beta: complex):
    """Newton-refine a mean-field fixed point; returns None on failure.

    Roots of the self-consistency polynomials can be badly conditioned near
    a critical drive; a few Newton steps on the actual amplitude equations
    restore full precision."""
    from scipy.optimize import root as _root

    def f(y):
        fa, fb = mean_field_rhs(p, y[0] + 1j * y[1], y[2] + 1j * y[3])
        return [fa.real, fa.imag, fb.real, fb.imag]

    sol = _root(f, [alpha.real, alpha.imag, beta.real, beta.imag],
                method="hybr", tol=1e-13)
    if not sol.success:
        return None
    return complex(sol.x[0], sol.x[1]), complex(sol.x[2], sol.x[3])


def _stable_tp_roots(p: SystemParams, chi: float) -> list:
    """Polished, dynamically stable fixed points at the given drive."""
    from .fluctuations import drift_matrix  # deferred: avoids import cycle

    q = p.replace(chi=chi)
    out = []
    for r in _real_nonneg_roots(_reciprocal_tp_polynomial(p, chi)):
        alpha, beta, _, _ = _tp_amplitudes_from_x(p, chi, r)
        polished = _polish_fixed_point(q, alpha, beta)
        if polished is None:
            continue
        alpha, beta = polished
        x = abs(alpha) ** 2
        if any(abs(x - prev[0]) < 1e-9 * max(1.0, x) for prev in out):
            continue
        M = drift_matrix(q, alpha, beta)
        if np.linalg.eigvals(M).real.max() < 0.0:
            out.append((x, alpha, beta))
    return sorted(out)


def _steady_reciprocal_two_photon(p: SystemParams) -> MeanFieldState:
    base = steady_reciprocal_single(p.replace(chi=0.0))
    x = base.photon_number
    # track the branch in chi where possible; steps with no stable root are
    # skipped so a transiently unstable window cannot strand the tracker
    for k in range(1, _HOMOTOPY_STEPS + 1):
        cands = _stable_tp_roots(p, p.chi * k / _HOMOTOPY_STEPS)
        if cands:
            x = min((c[0] for c in cands), key=lambda r: abs(r - x))
    final = _stable_tp_roots(p, p.chi)
    if not final:
        raise NoSteadyStateError(
            f"no dynamically stable reciprocal steady state at chi={p.chi:g}")
    x, alpha, beta = min(final, key=lambda c: abs(c[0] - x))
    w = 2.0 * p.kappa * p.omega_b / (p.gamma_b ** 2 + p.omega_b ** 2)
    S = w * (p.kappa * x - p.gravity_coupling_net)
    return _finish(p, alpha, beta, Regime.RECIPROCAL_TWO_PHOTON, detuning=S,
                   criticality_margin=p.gamma_a ** 2 + S ** 2 - p.chi ** 2,
                   all_roots=tuple(c[0] for c in final),
                   bistable=len(final) > 1)


# ---------------------------------------------------------------------------
# mechanical parametric amplification

def _mpa_beta(p: SystemParams, reciprocal_x: float | None = None) -> complex:
    """Mechanical amplitude under parametric modulation (2x2 linear solve)."""
    if reciprocal_x is None:
        q = p.gamma_b + p.lam + 1j * p.omega_b
        drive = p.gravity_coupling_net
    else:
        q = p.gamma_b + 1j * p.omega_b
        drive = p.gravity_coupling_net - p.kappa * reciprocal_x
    A = np.array([[q, 1j * p.upsilon], [-1j * p.upsilon, q.conjugate()]])
    sol = np.linalg.solve(A, np.array([-1j * drive, 1j * drive]))
    return complex(sol[0])


def steady_mpa(p: SystemParams, regime: Regime) -> MeanFieldState:
    """Steady state with mechanical parametric amplification (plus the
    single-photon drive and optionally the compensating force)."""
    _require(p.chi == 0.0, "MPA regime excludes the two-photon drive")
    if regime is Regime.NONRECIPROCAL_MPA:
        _require(p.is_nonreciprocal, "nonreciprocal regime needs lam == kappa")
        ups_c = mpa_critical(p)
        if abs(p.upsilon) >= ups_c * (1.0 - CRITICAL_MARGIN):
            raise BeyondCriticalError(
                f"|upsilon|={abs(p.upsilon):g} at or beyond critical point {ups_c:g}")
        beta = _mpa_beta(p)
        phase = 2.0 * p.kappa * (beta + beta.conjugate()).real
        alpha = -1j * p.eta / (p.gamma_a + p.kappa - 1j * phase)
        return _finish(p, alpha, beta, regime, detuning=phase,
                       criticality_margin=ups_c ** 2 - p.upsilon ** 2)

    if regime is Regime.RECIPROCAL_MPA:
        _require(p.is_reciprocal, "reciprocal regime needs lam == 0")
        ups_c = mpa_critical_reciprocal(p)
        if abs(p.upsilon) >= ups_c * (1.0 - CRITICAL_MARGIN):
            raise BeyondCriticalError(
                f"|upsilon|={abs(p.upsilon):g} at or beyond critical point {ups_c:g}")
        if p.force_F != 0.0 and math.isclose(p.force_F, p.gravity_coupling,
                                             rel_tol=1e-12):
            # Exactly compensating force: the self-consistency degenerates and
            # no usable steady state is defined for this operating point.
            raise NoSteadyStateError(
                "reciprocal MPA with F == G admits no steady-state solution")
        return _steady_reciprocal_mpa(p, ups_c)
    raise InvalidParamsError(f"{regime} is not an MPA regime")


def _steady_reciprocal_mpa(p: SystemParams, ups_c: float) -> MeanFieldState:
    # cubic in x: x*(gamma_a^2 + c4^2 (Gnet - kappa x)^2) = eta^2
    det_b = p.gamma_b ** 2 + p.omega_b ** 2 - p.upsilon ** 2
    c4 = 2.0 * p.kappa * (p.upsilon - p.omega_b) / det_b
    Gn = p.gravity_coupling_net

    def poly_at(eta):
        return np.array([
            -eta ** 2,
            p.gamma_a ** 2 + c4 ** 2 * Gn ** 2,
            -2.0 * c4 ** 2 * p.kappa * Gn,
            c4 ** 2 * p.kappa ** 2,
        ])

    x, roots = _select_by_homotopy(poly_at, p.eta)
    phase = c4 * (Gn - p.kappa * x)
    alpha = -1j * p.eta / (p.gamma_a - 1j * phase)
    beta = _mpa_beta(p, reciprocal_x=x)
    return _finish(p, alpha, beta, Regime.RECIPROCAL_MPA, detuning=phase,
                   criticality_margin=ups_c ** 2 - p.upsilon ** 2,
                   all_roots=tuple(roots), bistable=len(roots) > 1)


# ---------------------------------------------------------------------------
# dispatch

def steady_state(p: SystemParams, regime: Regime) -> MeanFieldState:
    """Solve the mean field for the requested regime."""
    if regime is Regime.NONRECIPROCAL_SINGLE:
        return steady_nonreciprocal_single(p)
    if regime is Regime.RECIPROCAL_SINGLE:
        return steady_reciprocal_single(p)
    if regime in (Regime.NONRECIPROCAL_TWO_PHOTON, Regime.RECIPROCAL_TWO_PHOTON):
        return steady_two_photon(p, regime)
    return steady_mpa(p, regime)


def regime_for(p: SystemParams) -> Regime:
    """Infer the natural regime from the parameter set."""
    if p.chi != 0.0:
        return (Regime.NONRECIPROCAL_TWO_PHOTON if p.is_nonreciprocal
                else Regime.RECIPROCAL_TWO_PHOTON)
    if p.upsilon != 0.0:
        return Regime.NONRECIPROCAL_MPA if p.is_nonreciprocal else Regime.RECIPROCAL_MPA
    return (Regime.NONRECIPROCAL_SINGLE if p.is_nonreciprocal
            else Regime.RECIPROCAL_SINGLE)
