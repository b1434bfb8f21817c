"""Gravimetry with a dissipative optomechanical cavity.

Analytic steady states, linearized noise, homodyne metrology, weak-drive
quantum Fisher information, and a brute-force Lindblad oracle to check it
all against.
"""

from .exceptions import (AdiabaticRegimeWarning, BeyondCriticalError,
                         DegenerateSteadyStateError, DimensionOverflowError,
                         InvalidDriveComboError, InvalidParamsError,
                         NoSteadyStateError, NotConvergedError, OptogravError,
                         UnverifiedRegimeWarning, WeakDriveWarning)
from .params import (SystemParams, gravity_detuning, gravity_detuning_slope,
                     mpa_critical, mpa_critical_reciprocal, two_photon_critical)
from .model import (AUTO, Drive, FockOperatorSet, build_hamiltonian,
                    build_liouvillian, build_three_mode_model, collective_op,
                    destroy, lambda_effective, mu_for_lambda, trace_functional,
                    unvec, vec)
from .mean_field import (MeanFieldState, Regime, mean_field_rhs, regime_for,
                         steady_mpa, steady_nonreciprocal_single,
                         steady_reciprocal_single, steady_state,
                         steady_two_photon,
                         asymptotic_reciprocal_photon_number)
from .fluctuations import (LinearSystem, SecondMoments, build_drift,
                           critical_noise_scaling, drift_eigenvalues_closed,
                           drift_matrix, fit_power_law, homodyne_variance,
                           homodyne_variance_simplified, noise_matrix,
                           pair_correlator_nonreciprocal,
                           photon_fluctuations_expanded_form,
                           photon_fluctuations_nonreciprocal,
                           photon_fluctuations_quadrature,
                           stability_frontier_chi, steady_covariance)
from .metrology import (MetrologyReport, Provenance, delta_g_closed_nonreciprocal,
                        delta_g_closed_reciprocal,
                        delta_g_saturation_nonreciprocal, mean_homodyne,
                        regime_ratio, susceptibility, uncertainty,
                        validity_ratio, zeta_infinite_drive)
from .weak_drive import (AmplitudeState, QfiResult, cavity_state,
                         effective_hamiltonian, qfi, qfi_closed_nonreciprocal,
                         qfi_closed_reciprocal, ratio_sweep, steady_amplitudes,
                         weak_drive_ratio_closed, weak_drive_ratio_limit,
                         write_ratio_csv)
from .oracle import (AdiabaticReport, Method, SteadyDensity, fidelity,
                     homodyne_moments, numeric_qfi, photon_number,
                     reduced_cavity, reduced_two_mode, steady_state as
                     oracle_steady_state, trace_distance, truncation_change,
                     validate_adiabatic_elimination)

__version__ = "0.1.0"
