"""Weak single-photon drive: two-level truncation, steady amplitudes, and
quantum Fisher information.

With eta and the residual displacement drive G' = G - F both small, the
system stays near the joint ground state and a single excitation per mode
suffices.  The no-jump dynamics is generated by the non-Hermitian

    H_w = (omega_b - i gamma_b) b'b - i gamma_a a'a - kappa a'a(b'+b)
          + G'(b'+b) - i lam z'z + eta(a+a')

whose steady amplitude ratios follow from a 3x3 linear solve with the
ground amplitude pinned to 1.  The estimation figure of merit is the QFI of
the normalized cavity-mode state (1, p10): the detector sees the cavity,
and at this order the mechanics is projected onto its vacuum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import (InvalidParamsError, UnverifiedRegimeWarning,
                         WeakDriveWarning)
from .model import build_hamiltonian, collective_op, Drive
from .params import SystemParams

# Drive/displacement thresholds for the two-level truncation (unit: gamma_b).
WEAK_DRIVE_MAX = 0.05
FD_REL_STEP = 1e-5
FD_CHECK_STEP = 1e-4
FD_CHECK_TOL = 1e-3
CLOSED_FORM_TOL = 0.05


@dataclass(frozen=True)
class AmplitudeState:
    """Steady probability amplitudes on {|00>,|01>,|10>,|11>}, p00 = 1.

    regime marks the coupling setting; drive_order records the truncation
    (terms linear in eta and G' are retained, the amplitudes solve the full
    linear system so mixed orders appear where the dynamics generates them).
    """
    p01: complex
    p10: complex
    p11: complex
    regime: str
    residual: float
    drive_order: str = "linear in (eta, G')"
    p00: complex = 1.0 + 0.0j

    def vector(self) -> np.ndarray:
        return np.array([self.p00, self.p01, self.p10, self.p11])


def _coupling_label(p: SystemParams) -> str:
    if p.is_nonreciprocal:
        return "nonreciprocal"
    if p.is_reciprocal:
        return "reciprocal"
    return f"lambda={p.lam:g}"


def _warn_thresholds(p: SystemParams) -> None:
    Gp = p.gravity_coupling_net
    if p.eta > WEAK_DRIVE_MAX or abs(Gp) > WEAK_DRIVE_MAX:
        warnings.warn(
            f"eta={p.eta:g}, |G'|={abs(Gp):g} exceed the weak-drive "
            f"threshold {WEAK_DRIVE_MAX}; truncation error grows quadratically",
            WeakDriveWarning, stacklevel=3)


def effective_hamiltonian(p: SystemParams, dims: tuple[int, int] = (2, 2)) -> np.ndarray:
    """Non-Hermitian no-jump generator on the truncated space.

    At lam = kappa the excitation-exchange block becomes one directional:
    <10|H|11> = G' - 2*kappa while <11|H|10> = G', i.e. the mechanics pushes
    the cavity but not conversely."""
    if p.chi != 0.0 or p.upsilon != 0.0:
        raise InvalidParamsError("weak-drive truncation covers the "
                                 "single-photon (+force) drive only")
    if not p.covered_coupling_regime:
        warnings.warn("lambda is neither 0 nor kappa; results are outside "
                      "the analytically verified regimes",
                      UnverifiedRegimeWarning, stacklevel=2)
    _warn_thresholds(p)
    drives = Drive.SINGLE_PHOTON | Drive.EXTERNAL_FORCE
    ops = build_hamiltonian(p.replace(lam=0.0), dims, drives)
    na = ops.a.conj().T @ ops.a
    nb = ops.b.conj().T @ ops.b
    z = collective_op(ops.a, ops.b)
    return (ops.hamiltonian
            - 1j * p.gamma_a * na - 1j * p.gamma_b * nb
            - 1j * p.lam * (z.conj().T @ z))


def steady_amplitudes(p: SystemParams) -> AmplitudeState:
    """Solve the steady conditions of the excited amplitudes with p00 = 1."""
    H = effective_hamiltonian(p, (2, 2))
    A = H[1:, 1:]
    rhs = -H[1:, 0]
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise InvalidParamsError(f"singular steady-condition system: {exc}") from exc
    full = np.concatenate(([1.0 + 0j], sol))
    residual = np.abs(H[1:, :] @ full).max() / max(1.0, np.linalg.norm(H, np.inf))
    return AmplitudeState(p01=complex(sol[0]), p10=complex(sol[1]),
                          p11=complex(sol[2]), regime=_coupling_label(p),
                          residual=float(residual))


def cavity_state(amps: AmplitudeState) -> np.ndarray:
    """Normalized cavity-mode state (1, p10) used for estimation."""
    v = np.array([amps.p00, amps.p10])
    return v / np.linalg.norm(v)


def qfi_closed_nonreciprocal(p: SystemParams) -> float:
    """8 k^2 eta^2 m / {omega_b (k+ga)^4 [(2k+ga+gb)^2 + omega_b^2]}."""
    k, ga, gb = p.kappa, p.gamma_a, p.gamma_b
    return (8.0 * k ** 2 * p.eta ** 2 * p.mass
            / (p.omega_b * (k + ga) ** 4
               * ((2 * k + ga + gb) ** 2 + p.omega_b ** 2)))


def qfi_closed_reciprocal(p: SystemParams) -> float:
    """2 k^2 eta^2 m / {omega_b (omega_b^2+gb^2) [(k^2+ga^2+ga gb)^2 + ga^2 omega_b^2]}."""
    k, ga, gb = p.kappa, p.gamma_a, p.gamma_b
    return (2.0 * k ** 2 * p.eta ** 2 * p.mass
            / (p.omega_b * (p.omega_b ** 2 + gb ** 2)
               * ((k ** 2 + ga ** 2 + ga * gb) ** 2 + ga ** 2 * p.omega_b ** 2)))


def _pure_state_qfi(state_of_g, g0: float, h: float) -> float:
    vp = state_of_g(g0 + h)
    vm = state_of_g(g0 - h)
    v0 = state_of_g(g0)
    dv = (vp - vm) / (2.0 * h)
    return 4.0 * (np.vdot(dv, dv).real - abs(np.vdot(v0, dv)) ** 2)


@dataclass(frozen=True)
class QfiResult:
    numeric: float
    closed_form: float
    regime: str
    closed_form_flagged: bool
    fd_step_consistent: bool

    @property
    def relative_deviation(self) -> float:
        if self.closed_form == 0.0:
            return math.inf
        return abs(self.numeric / self.closed_form - 1.0)


def qfi(p: SystemParams) -> QfiResult:
    """QFI of the cavity steady state, numerically and in closed form.

    The numeric route differentiates the normalized truncated steady state
    with respect to g by central differences (relative step FD_REL_STEP,
    consistency-checked at FD_CHECK_STEP).  The closed form is returned
    alongside; a deviation beyond CLOSED_FORM_TOL flags it rather than the
    numerics, since the numeric route is the one tied to the solved steady
    conditions."""
    if p.is_nonreciprocal:
        closed = qfi_closed_nonreciprocal(p)
    elif p.is_reciprocal:
        closed = qfi_closed_reciprocal(p)
    else:
        raise InvalidParamsError("QFI closed forms cover lam in {0, kappa}")

    def state(g):
        return cavity_state(steady_amplitudes(p.replace(g=g)))

    scale = max(abs(p.g), 1.0)
    numeric = _pure_state_qfi(state, p.g, FD_REL_STEP * scale)
    check = _pure_state_qfi(state, p.g, FD_CHECK_STEP * scale)
    consistent = abs(check - numeric) <= FD_CHECK_TOL * max(abs(numeric), 1e-300)
    flagged = abs(numeric - closed) > CLOSED_FORM_TOL * max(abs(closed), 1e-300)
    return QfiResult(numeric=numeric, closed_form=closed,
                     regime=_coupling_label(p), closed_form_flagged=flagged,
                     fd_step_consistent=consistent)


def weak_drive_ratio_closed(kappa: float, gamma_a: float, gamma_b: float,
                            omega_b: float) -> float:
    """R_w = sqrt(F_nr/F_r) from the two closed forms (eta and m cancel)."""
    ref = SystemParams(omega_b=omega_b, kappa=kappa, lam=kappa,
                       gamma_a=gamma_a, gamma_b=gamma_b, mass=1.0, g=1.0,
                       eta=1.0)
    return math.sqrt(qfi_closed_nonreciprocal(ref) / qfi_closed_reciprocal(ref))


def weak_drive_ratio_limit(gamma_a: float, gamma_b: float, omega_b: float) -> float:
    """Small-kappa limit of the closed-form ratio: 2 sqrt(omega_b^2+gamma_b^2)/gamma_a."""
    return 2.0 * math.hypot(omega_b, gamma_b) / gamma_a


def ratio_sweep(kappas, gamma_as, *, gamma_b: float = 1.0, omega_b: float = 20.0,
                source: str = "closed_form", eta: float = 0.01,
                G: float = 0.05) -> np.ndarray:
    """R_w surface over a (kappa, gamma_a) grid.

    source='closed_form' evaluates the two analytic closed forms (this is
    the quantity plotted in the reference ratio map).  source='finite_difference'
    instead differentiates the solved steady states at drive eta with the
    displacement drive compensated (F = G); see the tests for how far the
    two routes agree per regime."""
    kappas = np.asarray(list(kappas), dtype=float)
    gamma_as = np.asarray(list(gamma_as), dtype=float)
    R = np.empty((kappas.size, gamma_as.size))
    for i, k in enumerate(kappas):
        for j, ga in enumerate(gamma_as):
            if source == "closed_form":
                R[i, j] = weak_drive_ratio_closed(k, ga, gamma_b, omega_b)
            elif source == "finite_difference":
                base = dict(omega_b=omega_b, kappa=k, gamma_a=ga,
                            gamma_b=gamma_b, G=G, eta=eta, force_F=G)
                pn = SystemParams.with_gravity_coupling(lam=k, **base)
                pr = SystemParams.with_gravity_coupling(lam=0.0, **base)
                R[i, j] = math.sqrt(qfi(pn).numeric / qfi(pr).numeric)
            else:
                raise InvalidParamsError(f"unknown sweep source {source!r}")
    return R


def write_ratio_csv(path, kappas, gamma_as, R) -> None:
    """Emit the sweep as CSV with columns kappa, gamma_a, R_w."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("kappa,gamma_a,R_w\n")
        for i, k in enumerate(kappas):
            for j, ga in enumerate(gamma_as):
                fh.write(f"{k:.17g},{ga:.17g},{R[i, j]:.17g}\n")
