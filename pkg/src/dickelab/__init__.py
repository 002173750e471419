"""Numerical laboratory for the dissipative Dicke model.

Builds the adiabatically eliminated spin model, spectrally decomposes
its Liouvillian, evolves states exactly, quantifies relaxation with l1
coherence, logarithmic negativity and trace distance, and detects the
quantum Mpemba effect and its role reversal.
"""

from .errors import (DegenerateSpectrumError, NumericFailure,
                     UnitaryConstructionError, UnsupportedRegimeError)
from .linops import (BlochVector, bloch_state, dagger, devectorize, kron,
                     matrices_close, partial_transpose, spin_x, spin_y, spin_z,
                     trace_norm, validate_density_matrix, vectorize)
from .model import (AdiabaticRegimeWarning, BipartiteDickeParams, DickeParams,
                    adiabatic_a_coefficient, bipartite_generator, bipartite_model,
                    effective_hamiltonian, effective_jump, lindblad_generator)
from .liouville import (LindbladGenerator, LiouvilleSpectrum, apply_liouvillian,
                        build_liouvillian, evolve, evolve_grid, evolve_ode,
                        evolve_ode_sampled, load_spectrum, overlap_coeffs,
                        save_spectrum, spectral_decompose, steady_state)
from .measures import (MeasureKind, differential_measure, l1_coherence,
                       log_negativity, negativity, trace_distance)
from .qubit_exact import (SymmetricQubitParams, squared_coherence_excess, alpha_coefficients,
                          analytic_eigenvalues, analytic_l1, analytic_l1_difference,
                          analytic_l1_prime, analytic_overlap_coeffs,
                          analytic_overlap_coeffs_rotated, analytic_rho_t,
                          analytic_spectrum, rotate_overlap_coeffs, mpemba_sufficient_condition,
                          to_sorted_order)
from .mpemba import (MpembaVerdict, Ordering, RoleReversalVerdict, Trajectory,
                     coherence_preserving_unitary, detect_mpemba,
                     detect_role_reversal, haar_random_pure_state,
                     random_local_unitary, relaxation_time, rotated_bloch_state,
                     sample_trajectory, slowest_mode_elimination_unitary)

__version__ = "0.1.0"
