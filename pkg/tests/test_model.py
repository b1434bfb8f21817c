"""Operator algebra, Hamiltonian assembly, and Liouvillian structure."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import optograv as og

from optograv.exceptions import (AdiabaticRegimeWarning, DimensionOverflowError,
                                 InvalidDriveComboError, UnverifiedRegimeWarning)


def hand_assembled_hamiltonian(p, dims):
    """Independent dense assembly, element by element in the Fock basis."""
    da, db = dims
    G = p.gravity_coupling
    H = np.zeros((da * db, da * db), dtype=complex)
    for na in range(da):
        for nb in range(db):
            i = na * db + nb
            H[i, i] += p.omega_b * nb
            # b' + b terms: (-kappa*na + cos(theta)*G - F)
            coeff = -p.kappa * na + np.cos(p.theta_tilt) * G - p.force_F
            if nb + 1 < db:
                j = na * db + (nb + 1)
                H[j, i] += coeff * np.sqrt(nb + 1)
                H[i, j] += coeff * np.sqrt(nb + 1)
            if na + 1 < da:
                j = (na + 1) * db + nb
                H[j, i] += p.eta * np.sqrt(na + 1)
                H[i, j] += p.eta * np.sqrt(na + 1)
    return H


class TestHamiltonian:
    def test_entrywise_against_hand_assembly(self, make_params, basis_index):
        p = make_params(kappa=0.5, G=0.3, eta=0.1)
        ops = og.build_hamiltonian(p, (4, 4))
        expected = hand_assembled_hamiltonian(p, (4, 4))
        np.testing.assert_allclose(ops.hamiltonian, expected, atol=1e-14)
        i10 = basis_index((4, 4), 1, 0)
        i11 = basis_index((4, 4), 1, 1)
        i01 = basis_index((4, 4), 0, 1)
        i00 = basis_index((4, 4), 0, 0)
        # gravity and coupling add on the same matrix element: G - kappa
        assert ops.hamiltonian[i10, i11] == pytest.approx(0.3 - 0.5)
        assert ops.hamiltonian[i01, i00] == pytest.approx(0.3)

    def test_cavity_decouples_without_coupling_or_drive(self, make_params):
        p = make_params(kappa=0.0, lam=0.0, G=0.5, eta=0.0)
        ops = og.build_hamiltonian(p, (2, 2))
        na = ops.a.conj().T @ ops.a
        assert np.linalg.norm(ops.hamiltonian @ na - na @ ops.hamiltonian) < 1e-14

    def test_tilt_at_right_angle_removes_gravity(self, make_params, basis_index):
        p = make_params(kappa=0.3, G=0.7, theta_tilt=np.pi / 2)
        ops = og.build_hamiltonian(p, (3, 3))
        i01 = basis_index((3, 3), 0, 1)
        i00 = basis_index((3, 3), 0, 0)
        assert abs(ops.hamiltonian[i01, i00]) < 1e-16

    @pytest.mark.parametrize("drive_kwargs", [
        dict(eta=0.4), dict(chi=0.3), dict(upsilon=0.2), dict(eta=0.4, upsilon=0.2),
        dict(eta=0.4, force_F=0.1), dict(eta=0.4, chi=-0.3),
    ])
    def test_hermiticity(self, make_params, drive_kwargs):
        p = make_params(kappa=0.4, **drive_kwargs)
        H = og.build_hamiltonian(p, (4, 3)).hamiltonian
        assert np.linalg.norm(H - H.conj().T) == 0.0

    def test_invalid_drive_combo(self, make_params):
        p = make_params(chi=0.2, upsilon=0.3)
        with pytest.raises(InvalidDriveComboError):
            og.build_hamiltonian(p, (3, 3))
        with pytest.raises(InvalidDriveComboError):
            og.build_hamiltonian(make_params(chi=0.2, force_F=0.1), (3, 3))

    def test_dimension_limits(self, make_params):
        with pytest.raises(DimensionOverflowError):
            og.build_hamiltonian(make_params(), (1, 4))
        with pytest.raises(DimensionOverflowError):
            og.build_hamiltonian(make_params(), (100, 100))

    def test_uncovered_lambda_warns(self, make_params):
        p = make_params(kappa=0.4, lam=0.1)
        with pytest.warns(UnverifiedRegimeWarning):
            og.build_hamiltonian(p, (3, 3))

    def test_truncated_commutator(self, make_params):
        ops = og.build_hamiltonian(make_params(), (5, 4))
        for op, d_top, mode_axis in ((ops.a, 5, 0), (ops.b, 4, 1)):
            defect = op @ op.conj().T - op.conj().T @ op - np.eye(20)
            # nonzero only on states with the top Fock level of that mode
            full = defect.reshape(5, 4, 5, 4)
            sel = [slice(None)] * 2
            sel[mode_axis] = slice(0, d_top - 1)
            inner = full[tuple(sel) + tuple(sel)]
            assert np.abs(inner).max() < 1e-14


class TestLiouvillian:
    def test_vacuum_steady_state_undriven(self, make_params):
        p = make_params(kappa=0.0, lam=0.0, G=0.0, eta=0.0)
        ops = og.build_hamiltonian(p, (3, 3))
        L = og.build_liouvillian(ops)
        rho0 = np.zeros((9, 9), dtype=complex)
        rho0[0, 0] = 1.0
        assert np.linalg.norm(L @ og.vec(rho0)) < 1e-14

    @pytest.mark.parametrize("dims,kwargs", [
        ((6, 6), dict(kappa=0.3, eta=0.1, G=1.0)),
        ((10, 10), dict(kappa=0.3, eta=0.1, G=1.0)),
        ((4, 4), dict(kappa=0.5, chi=0.4, G=0.5)),
    ])
    def test_trace_preservation(self, make_params, dims, kwargs):
        ops = og.build_hamiltonian(make_params(**kwargs), dims)
        L = og.build_liouvillian(ops)
        n = ops.dim
        defect = L.conj().T @ og.trace_functional(n)
        assert np.linalg.norm(defect) < 1e-12

    def test_gauge_shift_leaves_liouvillian_unchanged(self, make_params):
        ops = og.build_hamiltonian(make_params(kappa=0.3, eta=0.2), (3, 3))
        L1 = og.build_liouvillian(ops)
        ops.hamiltonian = ops.hamiltonian + 3.7 * np.eye(ops.dim)
        L2 = og.build_liouvillian(ops)
        assert abs(L1 - L2).max() < 1e-12

    def test_dual_route_steady_state(self, make_params):
        # independent routes: long time integration vs null-space solve
        p = make_params(kappa=0.2, eta=0.1, G=0.2, omega_b=2.0)
        ops = og.build_hamiltonian(p, (3, 3))
        sd_null = og.oracle_steady_state(ops, og.Method.NULL_SPACE)
        sd_time = og.oracle_steady_state(ops, og.Method.TIME_EVOLUTION)
        assert og.trace_distance(sd_null.rho, sd_time.rho) < 1e-6


class TestThreeModeModel:
    def test_no_coupling_reduces_to_reciprocal_model(self, make_params):
        p = make_params(omega_b=2.0, kappa=0.2, lam=0.0, G=0.1, eta=0.1)
        three = og.build_three_mode_model(p, mu=0.0, omega_aux=0.0,
                                          gamma_c=50.0, dims=(3, 3, 3))
        sd3 = og.oracle_steady_state(three)
        rho_ab = og.reduced_two_mode(sd3)
        two = og.build_hamiltonian(p, (3, 3))
        sd2 = og.oracle_steady_state(two)
        assert og.trace_distance(rho_ab, sd2.rho) < 1e-10

    def test_effective_lambda_roundtrip(self):
        mu = og.mu_for_lambda(0.2, omega_aux=3.0, gamma_c=60.0)
        assert og.lambda_effective(mu, 3.0, 60.0) == pytest.approx(0.2, rel=1e-12)

    def test_matched_lambda_reproduces_dissipative_coupling(self, make_params):
        # golden tolerance recorded from the first converged run (3.3e-4)
        p = make_params(omega_b=2.0, kappa=0.2, lam=0.0, G=0.1, eta=0.1)
        rep = og.validate_adiabatic_elimination(
            p, mu=og.mu_for_lambda(0.2, 0.0, 50.0), omega_aux=0.0, gamma_c=50.0)
        assert rep.lambda_eff == pytest.approx(0.2, rel=1e-12)
        assert rep.adiabatic_ok
        assert rep.trace_distance < 5e-4

    def test_faster_auxiliary_mode_improves_reduction(self, make_params):
        p = make_params(omega_b=2.0, kappa=0.2, lam=0.0, G=0.1, eta=0.1)
        dists = []
        for gamma_c in (50.0, 500.0):
            rep = og.validate_adiabatic_elimination(
                p, mu=og.mu_for_lambda(0.2, 0.0, gamma_c), omega_aux=0.0,
                gamma_c=gamma_c)
            dists.append(rep.trace_distance)
        assert dists[1] < dists[0]

    def test_adiabatic_warning(self, make_params):
        p = make_params(kappa=0.2, lam=0.0)
        with pytest.warns(AdiabaticRegimeWarning):
            og.build_three_mode_model(p, mu=0.1, omega_aux=0.0, gamma_c=5.0,
                                      dims=(2, 2, 2))


class TestParams:
    def test_invariants_enforced(self):
        with pytest.raises(og.InvalidParamsError):
            og.SystemParams(omega_b=20, kappa=0.1, lam=0.1, gamma_a=-1,
                            gamma_b=1, mass=1, g=1)
        with pytest.raises(og.InvalidParamsError):
            og.SystemParams(omega_b=0, kappa=0.1, lam=0.1, gamma_a=1,
                            gamma_b=1, mass=1, g=1)

    def test_gravity_coupling_recomputed_on_replace(self, make_params):
        p = make_params(G=1.0)
        assert p.gravity_coupling == pytest.approx(1.0)
        q = p.replace(g=2.0)
        assert q.gravity_coupling == pytest.approx(2.0)
        r = p.replace(mass=4.0 * p.mass)
        assert r.gravity_coupling == pytest.approx(2.0)

    @given(st.floats(0.5, 30), st.floats(0.01, 2), st.floats(0.1, 3))
    @settings(max_examples=25, deadline=None)
    def test_detuning_consistent_with_beta(self, omega_b, kappa, G):
        p = og.SystemParams.with_gravity_coupling(
            omega_b=omega_b, kappa=kappa, lam=kappa, gamma_a=1.0, gamma_b=1.0,
            G=G)
        beta = -1j * G / (1j * omega_b + 1.0 + kappa)
        assert og.gravity_detuning(p) == pytest.approx(
            -2 * kappa * (beta + beta.conjugate()).real, rel=1e-12)
