"""Linearized fluctuation dynamics around a mean-field steady state.

Basis ordering is fixed to (da, da', db, db').  The drift matrix M and the
input-noise correlation matrix D are defined through

    dA/dt = M A + A_in,   <A_in,i(t) (A_in,j)'(t')> = D_ij delta(t-t'),

and the steady second moments C_ij = <A_i (A_j)'> solve the continuous
Lyapunov equation M C + C M' + D = 0 (dagger on the second factor).  The
composite noises entering the cavity and mechanics rows are

    A_1in = sqrt(2 gamma_a) a_in - i sqrt(2 lam) alpha (z_in + z_in')
    A_2in = sqrt(2 gamma_b) b_in + sqrt(2 lam) z_in

with vacuum statistics <d_in d_in'> = delta, all other second moments zero.
The shared z_in channel correlates the two rows; those cross terms are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.integrate import quad

from .exceptions import InvalidParamsError, NoSteadyStateError
from .mean_field import MeanFieldState
from .params import SystemParams, gravity_detuning, two_photon_critical

LYAPUNOV_RTOL = 1e-10


@dataclass(frozen=True)
class LinearSystem:
    """Drift, noise correlations, and stability of the 4d fluctuation vector."""
    drift: np.ndarray
    noise_corr: np.ndarray
    eigenvalues: np.ndarray
    stable: bool


@dataclass(frozen=True)
class SecondMoments:
    """Steady second moments of the fluctuation vector."""
    matrix: np.ndarray
    lyapunov_residual: float

    @property
    def n_a(self) -> float:
        """<da' da> photon-number fluctuations."""
        return self.matrix[1, 1].real

    @property
    def pair_a(self) -> complex:
        """<da da> pair correlator (quadrature asymmetry of the cavity noise)."""
        return complex(self.matrix[0, 1])

    @property
    def n_b(self) -> float:
        return self.matrix[3, 3].real

    @property
    def commutator_a(self) -> float:
        """<da da'> - <da' da>; equals 1 only when the linearized noise model
        is a complete quantum map (lam = 0).  With the multiplicative
        z-channel noise truncated at mean-field order it is
        gamma_a/(gamma_a+lam), a documented artifact of the linearization."""
        return (self.matrix[0, 0] - self.matrix[1, 1]).real


def drift_matrix(p: SystemParams, alpha: complex, beta: complex) -> np.ndarray:
    """Drift of (da, da', db, db') from linearizing the Langevin equations."""
    bb = (beta + np.conj(beta))
    cpl_a = 1j * (p.kappa + p.lam) * alpha
    cpl_b = 1j * (p.kappa - p.lam)
    M = np.zeros((4, 4), dtype=complex)
    M[0, 0] = -p.gamma_a - p.lam + 1j * (p.kappa + p.lam) * bb
    M[0, 1] = -1j * p.chi
    M[0, 2] = cpl_a
    M[0, 3] = cpl_a
    M[1, 0] = 1j * p.chi
    M[1, 1] = np.conj(M[0, 0])
    M[1, 2] = np.conj(cpl_a)
    M[1, 3] = np.conj(cpl_a)
    M[2, 0] = cpl_b * np.conj(alpha)
    M[2, 1] = cpl_b * alpha
    M[2, 2] = -1j * p.omega_b - p.gamma_b - p.lam
    M[2, 3] = -1j * p.upsilon
    M[3, 0] = np.conj(M[2, 1])
    M[3, 1] = np.conj(M[2, 0])
    M[3, 2] = np.conj(M[2, 3])
    M[3, 3] = np.conj(M[2, 2])
    return M


def noise_matrix(p: SystemParams, alpha: complex) -> np.ndarray:
    """Correlation matrix <A_in (A_in)'> of the composite input noises."""
    lam = p.lam
    a = alpha
    D = np.zeros((4, 4), dtype=complex)
    D[0, 0] = 2.0 * p.gamma_a + 2.0 * lam * abs(a) ** 2
    D[0, 1] = -2.0 * lam * a ** 2
    D[0, 2] = -2j * lam * a
    D[1, 0] = np.conj(D[0, 1])
    D[1, 1] = 2.0 * lam * abs(a) ** 2
    D[1, 2] = 2j * lam * np.conj(a)
    D[2, 0] = np.conj(D[0, 2])
    D[2, 1] = np.conj(D[1, 2])
    D[2, 2] = 2.0 * p.gamma_b + 2.0 * lam
    return D


def build_drift(p: SystemParams, mf: MeanFieldState) -> LinearSystem:
    """Assemble the linear system at a converged mean-field point."""
    if not mf.converged:
        raise InvalidParamsError("mean field not converged; refuse to linearize")
    M = drift_matrix(p, mf.alpha, mf.beta)
    ev = np.linalg.eigvals(M)
    return LinearSystem(drift=M, noise_corr=noise_matrix(p, mf.alpha),
                        eigenvalues=ev, stable=bool(ev.real.max() < 0.0))


def drift_eigenvalues_closed(p: SystemParams) -> np.ndarray:
    """Closed-form drift spectrum of the nonreciprocal (lam = kappa) model
    with optional two-photon drive:
    {+-i omega_b - gamma_b - kappa, -(gamma_a+kappa) +- sqrt(chi^2 - theta^2)}
    where theta is the displacement-induced cavity detuning."""
    if not p.is_nonreciprocal:
        raise InvalidParamsError("closed-form spectrum requires lam == kappa")
    th = gravity_detuning(p)
    root = np.sqrt(complex(p.chi ** 2 - th ** 2))
    gb = -p.gamma_b - p.lam
    ga = -p.gamma_a - p.lam
    return np.array([gb + 1j * p.omega_b, gb - 1j * p.omega_b,
                     ga + root, ga - root])


def steady_covariance(ls: LinearSystem) -> SecondMoments:
    """Solve M C + C M' + D = 0 for the steady second moments."""
    if not ls.stable:
        raise NoSteadyStateError("unstable drift: no steady covariance")
    C = sla.solve_sylvester(ls.drift, ls.drift.conj().T, -ls.noise_corr)
    res = np.linalg.norm(ls.drift @ C + C @ ls.drift.conj().T + ls.noise_corr)
    scale = max(np.linalg.norm(ls.noise_corr), 1e-30)
    return SecondMoments(matrix=C, lyapunov_residual=res / scale)


def homodyne_variance(m: SecondMoments) -> float:
    """Steady variance of M = a + a':  1 + 2<da' da> + 2 Re<da da>."""
    return 1.0 + 2.0 * m.n_a + 2.0 * m.pair_a.real


def homodyne_variance_simplified(m: SecondMoments) -> float:
    """Pair-correlator-free form 1 + 2<da' da>, kept for comparison with the
    analytic noise expressions that drop <da da>."""
    return 1.0 + 2.0 * m.n_a


# ---------------------------------------------------------------------------
# closed forms (nonreciprocal, single-photon drive)

def photon_fluctuations_nonreciprocal(p: SystemParams, alpha: complex) -> float:
    """Exact steady <da' da> of the nonreciprocal single-photon model.

    The cavity-mechanics noise cross-correlations cancel the mechanically
    radiated contribution exactly, leaving lam*|alpha|^2/(lam+gamma_a).
    Requires lam == kappa (block-triangular drift)."""
    if not p.is_nonreciprocal:
        raise InvalidParamsError("closed form requires lam == kappa")
    return p.lam * abs(alpha) ** 2 / (p.lam + p.gamma_a)


def pair_correlator_nonreciprocal(p: SystemParams, alpha: complex) -> complex:
    """Exact steady <da da> of the nonreciprocal single-photon model:
    -lam*alpha^2/(gamma_a + lam + i*theta)."""
    if not p.is_nonreciprocal:
        raise InvalidParamsError("closed form requires lam == kappa")
    th = gravity_detuning(p)
    return -p.lam * alpha ** 2 / (p.gamma_a + p.lam + 1j * th)


def photon_fluctuations_expanded_form(p: SystemParams, alpha: complex) -> float:
    """Expanded algebraic form of <da' da> retained for cross-checking.

    Exact only when omega_b dominates the damping rates; at low mechanical
    frequency it overcounts the mechanically radiated noise (see tests for
    the measured deviations).  Kept as documentation of the long-hand
    algebra, not as an oracle."""
    k, ga, gb = p.kappa, p.gamma_a, p.gamma_b
    th = gravity_detuning(p)
    w2 = (2 * k + ga + gb) ** 2 + (p.omega_b + th) ** 2
    num = k * abs(alpha) ** 2 * ((k + gb) * w2
                                 + 4 * k * (k + gb) * (2 * k + ga + gb)
                                 + 8 * k ** 2 * (2 * k + ga + gb))
    return num / ((k + ga) * (k + gb) * w2)


def photon_fluctuations_quadrature(p: SystemParams, mf: MeanFieldState,
                                   rtol: float = 1e-12) -> float:
    """Time-domain route to <da' da>: numerical quadrature of the explicit
    exponential response kernels of the block-triangular (lam = kappa,
    single-photon) system against the input-noise correlations.

    Independent of the Lyapunov solve; used as its cross-check."""
    if not p.is_nonreciprocal or p.chi != 0.0 or p.upsilon != 0.0:
        raise InvalidParamsError("kernel route covers the nonreciprocal "
                                 "single-photon model only")
    lam = p.lam
    al = mf.alpha
    th = -2.0 * p.kappa * (mf.beta + np.conj(mf.beta)).real
    pdec = p.gamma_a + lam + 1j * th
    qdec = p.gamma_b + lam + 1j * p.omega_b
    c = 2j * p.kappa * al

    def kernels(t):
        k1 = np.exp(-pdec * t)
        k2 = c * (np.exp(-qdec * t) - k1) / (pdec - qdec)
        k3 = c * (np.exp(-np.conj(qdec) * t) - k1) / (pdec - np.conj(qdec))
        return k1, k2, k3

    def integrand(t):
        k1, _, k3 = kernels(t)
        val = (2.0 * lam * abs(al) ** 2 * abs(k1) ** 2
               + 2j * lam * np.conj(al) * np.conj(k1) * k3
               - 2j * lam * al * np.conj(k3) * k1
               + (2.0 * p.gamma_b + 2.0 * lam) * abs(k3) ** 2)
        return val.real

    T = 60.0 / min(p.gamma_a + lam, p.gamma_b + lam)
    value, _ = quad(integrand, 0.0, T, limit=400, epsabs=1e-14, epsrel=rtol)
    return value


# ---------------------------------------------------------------------------
# critical-point utilities

def stability_frontier_chi(p: SystemParams, hi: float | None = None,
                           tol: float = 1e-12) -> float:
    """Locate the two-photon instability onset by bisection on the drift
    spectrum.

    In the nonreciprocal model the spectrum is independent of the cavity
    amplitude (block-triangular drift), so the search is well defined on
    both sides of the transition."""
    if not p.is_nonreciprocal:
        raise InvalidParamsError("frontier search covers lam == kappa")
    beta = -1j * p.gravity_coupling_net / (1j * p.omega_b + p.gamma_b + p.kappa)

    def max_re(chi):
        M = drift_matrix(p.replace(chi=chi), 0.0, beta)
        return np.linalg.eigvals(M).real.max()

    lo = 0.0
    if hi is None:
        hi = 3.0 * two_photon_critical(p)
    if max_re(lo) >= 0 or max_re(hi) < 0:
        raise InvalidParamsError("bracket does not straddle the frontier")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if max_re(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_power_law(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and intercept of log y vs log x."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def critical_noise_scaling(p: SystemParams, chi_values) -> tuple[float, list]:
    """Fit the divergence exponent of <da' da> against the criticality
    margin chi_c^2 - chi^2 over the supplied two-photon amplitudes."""
    from .mean_field import Regime, steady_two_photon

    chi_values = list(chi_values)
    if len(chi_values) < 4:
        raise InvalidParamsError("need at least 4 points for a scaling fit")
    margins, values = [], []
    for chi in chi_values:
        q = p.replace(chi=chi)
        mf = steady_two_photon(q, Regime.NONRECIPROCAL_TWO_PHOTON)
        mom = steady_covariance(build_drift(q, mf))
        margins.append(mf.criticality_margin)
        values.append(mom.n_a)
    slope, _ = fit_power_law(margins, values)
    return slope, list(zip(margins, values))
