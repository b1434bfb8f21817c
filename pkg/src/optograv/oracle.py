"""Brute-force master-equation ground truth on truncated Fock spaces.

Steady states come from a direct sparse null-space solve (one row of the
Liouvillian replaced by the trace constraint) or from long adaptive time
integration; both are exposed so they can check each other.  Observable
extraction, fidelity-based QFI, and the three-mode elimination check live
here as well.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .exceptions import (DegenerateSteadyStateError, DimensionOverflowError,
                         NotConvergedError)
from .model import (FockOperatorSet, build_hamiltonian, build_liouvillian,
                    build_three_mode_model, lambda_effective, trace_functional,
                    unvec, vec)
from .params import SystemParams

log = logging.getLogger("optograv.oracle")

# Null-space solves factorize the full Liouvillian; cap the Hilbert dimension
# so the superoperator stays within a 1e4 x 1e4 sparse solve.  Larger systems
# need the time-evolution route or an iterative solver.
MAX_NULLSPACE_DIM = 100
TOP_POPULATION_TOL = 1e-4
STEADY_RESIDUAL_RTOL = 1e-9
DEGENERACY_TOL = 1e-8
POSITIVITY_FLOOR = -1e-9


class Method(enum.Enum):
    NULL_SPACE = "null_space"
    TIME_EVOLUTION = "time_evolution"


@dataclass
class SteadyDensity:
    rho: np.ndarray
    dims: tuple
    method: Method
    residual: float
    top_populations: tuple
    converged: bool


def _mode_dims(ops: FockOperatorSet) -> tuple:
    return ((ops.dim_a, ops.dim_b) if ops.dim_c == 0
            else (ops.dim_a, ops.dim_b, ops.dim_c))


def _top_level_populations(rho: np.ndarray, dims: tuple) -> tuple:
    full = rho.reshape(dims + dims)
    pops = []
    for k, d in enumerate(dims):
        idx = [slice(None)] * len(dims)
        idx[k] = d - 1
        sub = full[tuple(idx) + tuple(idx)]
        axes = list(range(sub.ndim // 2))
        pops.append(float(np.trace(sub.reshape(
            int(np.prod(sub.shape[:sub.ndim // 2])), -1)).real))
    return tuple(pops)


def _finish_steady(rho, ops, method, L) -> SteadyDensity:
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = float(np.linalg.norm(L @ vec(rho)) / spla.norm(L))
    dims = _mode_dims(ops)
    pops = _top_level_populations(rho, dims)
    converged = residual < STEADY_RESIDUAL_RTOL and all(
        t < TOP_POPULATION_TOL for t in pops)
    if not converged:
        log.warning("steady state flagged: residual=%.2e top_pops=%s",
                    residual, pops)
    return SteadyDensity(rho=rho, dims=dims, method=method, residual=residual,
                         top_populations=pops, converged=converged)


def _solve_null_space(L: sp.csr_matrix, n: int, constraint_row: int = 0) -> np.ndarray:
    import warnings as _warnings

    A = L.tolil(copy=True)
    A[constraint_row, :] = trace_functional(n)
    rhs = np.zeros(n * n, dtype=complex)
    rhs[constraint_row] = 1.0
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore", spla.MatrixRankWarning)
        x = spla.spsolve(A.tocsc(), rhs)
    if not np.all(np.isfinite(x)):
        raise DegenerateSteadyStateError(
            "Liouvillian plus trace constraint is singular: null space is "
            "not one dimensional")
    return unvec(x)


def steady_state(ops: FockOperatorSet, method: Method | str = Method.NULL_SPACE,
                 check_degenerate: bool = True) -> SteadyDensity:
    """Steady density matrix of the Lindblad generator built from ops."""
    method = Method(method)
    n = ops.dim
    L = build_liouvillian(ops)
    if method is Method.NULL_SPACE:
        if n > MAX_NULLSPACE_DIM:
            raise DimensionOverflowError(
                f"dimension {n} exceeds null-space cap {MAX_NULLSPACE_DIM}; "
                "use time evolution or an iterative solver")
        rho = _solve_null_space(L, n, 0)
        if check_degenerate:
            alt = _solve_null_space(L, n, n * n - 1)
            if trace_distance(rho / np.trace(rho), alt / np.trace(alt)) > DEGENERACY_TOL:
                raise DegenerateSteadyStateError(
                    "null space not one dimensional: constraint placement "
                    "changes the steady state")
        return _finish_steady(rho, ops, method, L)

    # time evolution from vacuum to t = 20/min amplitude rate
    rates = [rate / 2.0 for rate, _ in ops.collapse_ops]
    t_final = 20.0 / min(rates)
    rho0 = np.zeros((n, n), dtype=complex)
    rho0[0, 0] = 1.0
    sol = solve_ivp(lambda t, y: L @ y, (0.0, t_final), vec(rho0),
                    rtol=1e-10, atol=1e-12, method="DOP853")
    if not sol.success:
        raise NotConvergedError(f"time evolution failed: {sol.message}")
    return _finish_steady(unvec(sol.y[:, -1]), ops, method, L)


def expectation(op: np.ndarray, sd: SteadyDensity) -> complex:
    return complex(np.trace(op @ sd.rho))


def photon_number(sd: SteadyDensity, ops: FockOperatorSet) -> float:
    return expectation(ops.a.conj().T @ ops.a, sd).real


def homodyne_moments(sd: SteadyDensity, ops: FockOperatorSet) -> tuple[float, float]:
    """(<M>, var M) for M = a + a', exact on the truncation."""
    M = ops.a + ops.a.conj().T
    m1 = expectation(M, sd).real
    m2 = expectation(M @ M, sd).real
    return m1, m2 - m1 ** 2


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(rho - sigma)
    return 0.5 * float(np.abs(ev).sum())


def reduced_cavity(sd: SteadyDensity) -> np.ndarray:
    """Partial trace over everything but the cavity mode."""
    dims = sd.dims
    rest = int(np.prod(dims[1:]))
    full = sd.rho.reshape(dims[0], rest, dims[0], rest)
    return np.trace(full, axis1=1, axis2=3)


def reduced_two_mode(sd: SteadyDensity) -> np.ndarray:
    """Partial trace over the auxiliary mode of a three-mode state."""
    da, db, dc = sd.dims
    full = sd.rho.reshape(da, db, dc, da, db, dc)
    return np.trace(full, axis1=2, axis2=5).reshape(da * db, da * db)


def _clamped_eigh(rho: np.ndarray):
    vals, vecs = np.linalg.eigh(rho)
    worst = vals.min()
    if worst < POSITIVITY_FLOOR:
        raise NotConvergedError(
            f"density matrix eigenvalue {worst:.2e} below positivity floor")
    if worst < 0.0:
        log.info("clamping negative eigenvalues of magnitude %.2e for fidelity",
                 -worst)
    return np.clip(vals, 0.0, None), vecs


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 with the
    positivity floor applied to both arguments."""
    vals, vecs = _clamped_eigh(rho)
    sqrt_rho = (vecs * np.sqrt(vals)) @ vecs.conj().T
    vals2, _ = _clamped_eigh(sigma)  # floor check on sigma as well
    inner = sqrt_rho @ sigma @ sqrt_rho
    ivals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sqrt(np.clip(ivals, 0.0, None)).sum() ** 2)


def numeric_qfi(p: SystemParams, dg: float, dims: tuple[int, int],
                method: Method | str = Method.NULL_SPACE) -> float:
    """Mixed-state QFI of the reduced cavity steady state from the fidelity
    between solutions at g -+ dg:  8*(1 - sqrt(F)) / (2 dg)^2."""
    rhos = []
    for gv in (p.g - dg, p.g + dg):
        ops = build_hamiltonian(p.replace(g=gv), dims)
        sd = steady_state(ops, method)
        rhos.append(reduced_cavity(sd))
    F = fidelity(rhos[0], rhos[1])
    return 8.0 * (1.0 - np.sqrt(F)) / (2.0 * dg) ** 2


@dataclass(frozen=True)
class AdiabaticReport:
    trace_distance: float
    lambda_eff: float
    gamma_ratio: float
    adiabatic_ok: bool


def validate_adiabatic_elimination(p: SystemParams, mu: float, omega_aux: float,
                                   gamma_c: float,
                                   dims: tuple[int, int, int] = (3, 3, 3)
                                   ) -> AdiabaticReport:
    """Trace distance between the reduced (a, b) steady state of the
    three-mode model and the steady state of the dissipative-coupling model
    at the matching lambda."""
    lam_eff = lambda_effective(mu, omega_aux, gamma_c)
    three = build_three_mode_model(p, mu, omega_aux, gamma_c, dims)
    sd3 = steady_state(three)
    rho_ab = reduced_two_mode(sd3)

    p2 = p.replace(lam=lam_eff)
    two = build_hamiltonian(p2, (dims[0], dims[1]))
    sd2 = steady_state(two)
    ratio = gamma_c / max(p.gamma_a, p.gamma_b)
    return AdiabaticReport(trace_distance=trace_distance(rho_ab, sd2.rho),
                           lambda_eff=lam_eff, gamma_ratio=ratio,
                           adiabatic_ok=ratio >= 50.0)


def truncation_change(p: SystemParams, dims: tuple[int, int],
                      method: Method | str = Method.NULL_SPACE) -> tuple[float, float, float]:
    """Relative change of the steady photon number when both truncations are
    doubled; used as the convergence gate for oracle runs."""
    ops1 = build_hamiltonian(p, dims)
    n1 = photon_number(steady_state(ops1, method), ops1)
    bigger = (2 * dims[0], 2 * dims[1])
    ops2 = build_hamiltonian(p, bigger)
    n2 = photon_number(steady_state(ops2, method), ops2)
    return n1, n2, abs(n2 - n1) / max(abs(n2), 1e-300)
