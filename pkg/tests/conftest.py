import pytest

from optograv import SystemParams


@pytest.fixture
def make_params():
    """Factory with the standard unit conventions (gamma_b = 1, dG/dg set by G)."""
    def _make(omega_b=20.0, kappa=0.05, lam=None, gamma_a=1.0, gamma_b=1.0,
              G=1.0, g=1.0, **kwargs):
        if lam is None:
            lam = kappa
        if G == 0.0:
            return SystemParams(omega_b=omega_b, kappa=kappa, lam=lam,
                                gamma_a=gamma_a, gamma_b=gamma_b,
                                mass=2.0 * omega_b, g=0.0, **kwargs)
        return SystemParams.with_gravity_coupling(
            omega_b=omega_b, kappa=kappa, lam=lam, gamma_a=gamma_a,
            gamma_b=gamma_b, G=G, g=g, **kwargs)
    return _make


def fock_index(dims, *levels):
    """Row index of |n_a, n_b, ...> under the kron ordering used by the builders."""
    idx = 0
    for d, n in zip(dims, levels):
        idx = idx * d + n
    return idx


@pytest.fixture
def basis_index():
    return fock_index
