"""Truncated Fock-space operators, Hamiltonians, and Liouvillians.

Frame convention: all Hamiltonians are written in the frame rotating at the
cavity frequency with a resonant drive, so no bare cavity term appears.  The
gravity (and compensating force) term enters the mechanics as
(cos(theta)*G - F)*(b' + b).

Superoperators use column stacking: vec(A X B) = (B^T kron A) vec(X), so a
density matrix rho maps to rho.reshape(-1, order='F').

Dissipator convention: collapse_ops stores (rate, operator) pairs where rate
is the full Lindblad rate, i.e. rho' = rate*(o rho o' - {o'o, rho}/2).  An
amplitude-decay rate gamma corresponds to rate = 2*gamma, which is what the
builders insert; this is the unique choice consistent with the Langevin
equations the rest of the package is built on.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .exceptions import (DimensionOverflowError, InvalidDriveComboError,
                         AdiabaticRegimeWarning, UnverifiedRegimeWarning)
from .params import SystemParams

# Product-space cap for dense operator construction (builders) and the
# default cap for direct null-space solves of the Liouvillian.
MAX_HILBERT_DIM = 4096
MAX_NULLSPACE_DIM = 400

# Ratio gamma_c / max(gamma_a, gamma_b) below which adiabatic elimination of
# the auxiliary mode is considered unreliable.
ADIABATIC_RATIO = 50.0


class Drive(enum.Flag):
    """Drive terms included in a Hamiltonian build."""
    NONE = 0
    SINGLE_PHOTON = enum.auto()
    TWO_PHOTON = enum.auto()
    MPA = enum.auto()
    EXTERNAL_FORCE = enum.auto()


AUTO = object()  # sentinel: infer drives from nonzero parameter fields


@dataclass
class FockOperatorSet:
    """Annihilation operators and assembled Hamiltonian on a truncated space.

    dim_c == 0 means the auxiliary mode is absent and c is None.
    collapse_ops holds (lindblad_rate, operator) pairs, lindblad_rate = 2*gamma.
    """
    dim_a: int
    dim_b: int
    dim_c: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray | None
    hamiltonian: np.ndarray
    collapse_ops: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def _infer_drives(p: SystemParams) -> Drive:
    d = Drive.NONE
    if p.eta != 0.0:
        d |= Drive.SINGLE_PHOTON
    if p.chi != 0.0:
        d |= Drive.TWO_PHOTON
    if p.upsilon != 0.0:
        d |= Drive.MPA
    if p.force_F != 0.0:
        d |= Drive.EXTERNAL_FORCE
    return d


def _check_drive_combo(drives: Drive) -> None:
    # The two-photon drive is never combined with mechanical modulation or a
    # static force; the single-photon drive coexists with anything.
    if drives & Drive.TWO_PHOTON and drives & (Drive.MPA | Drive.EXTERNAL_FORCE):
        raise InvalidDriveComboError(
            "two-photon drive cannot be combined with MPA or an external force")


def _warn_if_uncovered(p: SystemParams) -> None:
    if not p.covered_coupling_regime:
        warnings.warn(
            "lambda is neither 0 nor kappa; results are outside the "
            "analytically verified regimes", UnverifiedRegimeWarning, stacklevel=3)


def collective_op(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Collective annihilation operator z = i a'a + b of the shared reservoir."""
    return 1j * (a.conj().T @ a) + b


def build_hamiltonian(p: SystemParams, dims: tuple[int, int],
                      drives=AUTO) -> FockOperatorSet:
    """Assemble the two-mode Hamiltonian and its collapse operators.

    dims = (dim_a, dim_b) Fock truncations, each >= 2.  drives selects which
    drive terms are included; by default every term with a nonzero amplitude
    in p.  Raises DimensionOverflowError when dim_a*dim_b exceeds the cap.
    """
    da, db = dims
    if da < 2 or db < 2:
        raise DimensionOverflowError("need at least two Fock levels per mode")
    if da * db > MAX_HILBERT_DIM:
        raise DimensionOverflowError(
            f"product dimension {da*db} exceeds cap {MAX_HILBERT_DIM}")
    if drives is AUTO:
        drives = _infer_drives(p)
    _check_drive_combo(drives)
    _warn_if_uncovered(p)

    a = np.kron(destroy(da), np.eye(db))
    b = np.kron(np.eye(da), destroy(db))
    na = a.conj().T @ a
    xb = b.conj().T + b

    H = p.omega_b * (b.conj().T @ b) - p.kappa * na @ xb
    H = H + np.cos(p.theta_tilt) * p.gravity_coupling * xb
    if drives & Drive.EXTERNAL_FORCE:
        H = H - p.force_F * xb
    if drives & Drive.SINGLE_PHOTON:
        H = H + p.eta * (a + a.conj().T)
    if drives & Drive.TWO_PHOTON:
        H = H + 0.5 * p.chi * (a @ a + a.conj().T @ a.conj().T)
    if drives & Drive.MPA:
        H = H + 0.5 * p.upsilon * (b @ b + b.conj().T @ b.conj().T)

    collapse = [(2.0 * p.gamma_a, a), (2.0 * p.gamma_b, b)]
    if p.lam > 0.0:
        collapse.append((2.0 * p.lam, collective_op(a, b)))
    return FockOperatorSet(dim_a=da, dim_b=db, dim_c=0, a=a, b=b, c=None,
                           hamiltonian=H, collapse_ops=collapse)


def lambda_effective(mu: float, omega_aux: float, gamma_c: float) -> float:
    """Dissipative coupling produced by eliminating the auxiliary mode:
    lambda = mu^2 * gamma_c / (omega_aux^2 + gamma_c^2)."""
    return mu ** 2 * gamma_c / (omega_aux ** 2 + gamma_c ** 2)


def mu_for_lambda(lam: float, omega_aux: float, gamma_c: float) -> float:
    """Auxiliary coupling strength that realizes a target lambda."""
    return np.sqrt(lam * (omega_aux ** 2 + gamma_c ** 2) / gamma_c)


def build_three_mode_model(p: SystemParams, mu: float, omega_aux: float,
                           gamma_c: float, dims: tuple[int, int, int],
                           drives=AUTO) -> FockOperatorSet:
    """Three-mode microscopic model whose reduced (a, b) dynamics realizes
    the dissipative coupling.

    The auxiliary lossy mode c couples to the collective operator
    z = i a'a + b through  mu*(z c' + z' c); eliminating c at damping
    gamma_c leaves the two-mode model with
    lambda = mu^2 gamma_c / (omega_aux^2 + gamma_c^2).

    The elimination needs gamma_c to dominate every system rate; below
    ADIABATIC_RATIO times max(gamma_a, gamma_b) a warning is attached
    rather than a hard error.
    """
    da, db, dc = dims
    if min(da, db, dc) < 2:
        raise DimensionOverflowError("need at least two Fock levels per mode")
    if da * db * dc > MAX_HILBERT_DIM:
        raise DimensionOverflowError(
            f"product dimension {da*db*dc} exceeds cap {MAX_HILBERT_DIM}")
    if gamma_c < ADIABATIC_RATIO * max(p.gamma_a, p.gamma_b):
        warnings.warn("adiabatic regime not satisfied: gamma_c should exceed "
                      f"{ADIABATIC_RATIO}x the system rates",
                      AdiabaticRegimeWarning, stacklevel=2)
    if drives is AUTO:
        drives = _infer_drives(p)
    _check_drive_combo(drives)

    Ic = np.eye(dc)
    two = build_hamiltonian(p.replace(lam=0.0), (da, db), drives)
    a = np.kron(two.a, Ic)
    b = np.kron(two.b, Ic)
    c = np.kron(np.eye(da * db), destroy(dc))
    H = np.kron(two.hamiltonian, Ic)
    z = collective_op(a, b)
    H = H + omega_aux * (c.conj().T @ c) + mu * (z @ c.conj().T + z.conj().T @ c)
    collapse = [(2.0 * p.gamma_a, a), (2.0 * p.gamma_b, b), (2.0 * gamma_c, c)]
    return FockOperatorSet(dim_a=da, dim_b=db, dim_c=dc, a=a, b=b, c=c,
                           hamiltonian=H, collapse_ops=collapse)


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return rho.reshape(-1, order="F")


def unvec(x: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(x.size)))
    return x.reshape((n, n), order="F")


def build_liouvillian(ops: FockOperatorSet, p: SystemParams | None = None) -> sp.csr_matrix:
    """Sparse Liouvillian L with d vec(rho)/dt = L vec(rho).

    Uses the collapse list assembled by the builder; the optional params
    argument is accepted for interface symmetry and only used to re-check
    the coupling-regime warning.
    """
    if p is not None:
        _warn_if_uncovered(p)
    n = ops.dim
    I = sp.identity(n, format="csr", dtype=complex)
    Hs = sp.csr_matrix(ops.hamiltonian)
    L = -1j * (sp.kron(I, Hs) - sp.kron(Hs.T, I))
    for rate, op in ops.collapse_ops:
        cs = sp.csr_matrix(op)
        cdc = sp.csr_matrix(op.conj().T @ op)
        L = L + rate * (sp.kron(cs.conj(), cs)
                        - 0.5 * sp.kron(I, cdc)
                        - 0.5 * sp.kron(cdc.T, I))
    return L.tocsr()


def trace_functional(n: int) -> np.ndarray:
    """Row vector t with t @ vec(rho) = tr(rho) under column stacking."""
    t = np.zeros(n * n, dtype=complex)
    t[:: n + 1] = 1.0
    return t
