import json
import math

import numpy as np
import pytest

from dickelab.errors import DegenerateSpectrumError, NumericFailure
from dickelab.linops import bloch_state, dagger, devectorize, matrices_close, vectorize
from dickelab.liouville import (LindbladGenerator, apply_liouvillian, build_liouvillian,
                                evolve, evolve_grid, evolve_ode, evolve_ode_sampled,
                                overlap_coeffs, spectral_decompose, spectrum_from_dict,
                                spectrum_to_dict, steady_state)
from dickelab.model import DickeParams, lindblad_generator
from dickelab.qubit_exact import SymmetricQubitParams, analytic_rho_t, analytic_spectrum

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

RZ = math.sqrt(0.68)


def qubit_generator(g=3.0, p=1.0):
    return lindblad_generator(DickeParams(Omega=p, omega=p, g=g, kappa=p, N=1))


def random_generator(rng, dim=2, n_jumps=1):
    h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (h + dagger(h))
    jumps = tuple(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
                  for _ in range(n_jumps))
    return LindbladGenerator(h, jumps)


def random_state(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ dagger(m)
    return rho / np.trace(rho)


class TestGenerator:
    def test_rejects_nonhermitian_hamiltonian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            LindbladGenerator(np.array([[0.0, 1.0], [0.0, 0.0]]), ())

    def test_rejects_mismatched_jump(self):
        with pytest.raises(ValueError, match="jump"):
            LindbladGenerator(np.eye(2), (np.eye(3),))


class TestBuildLiouvillian:
    def test_trivial_generator(self):
        gen = LindbladGenerator(np.zeros((2, 2)), ())
        assert matrices_close(build_liouvillian(gen), np.zeros((4, 4)), 0.0)

    @pytest.mark.parametrize("g", [3.0, 1.0, 4.5])
    def test_symmetric_qubit_matrix(self, g):
        p = 1.0
        u = g**2 / (5 * p)
        expected = np.array([
            [-u, 0, 0, u],
            [0, -u + 1j * p, u, 0],
            [0, u, -u - 1j * p, 0],
            [u, 0, 0, -u],
        ])
        assert matrices_close(build_liouvillian(qubit_generator(g=g, p=p)),
                              expected, 1e-12)

    def test_action_matches_direct_master_equation(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            gen = random_generator(rng, dim=int(rng.integers(2, 5)),
                                   n_jumps=int(rng.integers(1, 3)))
            rho = random_state(rng, gen.dim)
            via_matrix = devectorize(build_liouvillian(gen) @ vectorize(rho))
            assert np.max(np.abs(via_matrix - apply_liouvillian(gen, rho))) < 1e-10


class TestSpectralDecompose:
    def test_symmetric_qubit_eigenvalues(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        q = math.sqrt(56.0)
        expected = np.array([0.0, (q - 9) / 5, (-q - 9) / 5, -3.6])
        assert np.max(np.abs(spec.eigenvalues - expected)) < 1e-9
        assert abs(spec.gap - (9 - q) / 5) < 1e-9

    def test_identity_left_mode(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        ell1 = spec.left[0]
        scaled = ell1 / ell1[0, 0]
        assert matrices_close(scaled, np.eye(2), 1e-10)

    def test_trace_identity(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            lv = build_liouvillian(random_generator(rng))
            spec = spectral_decompose(lv)
            assert abs(np.sum(spec.eigenvalues) - np.trace(lv)) < 1e-9

    def test_sorted_descending(self):
        rng = np.random.default_rng(41)
        spec = spectral_decompose(build_liouvillian(random_generator(rng, dim=4)))
        assert np.all(np.diff(spec.eigenvalues.real) <= 1e-12)

    def test_closure_residuals(self):
        lv = build_liouvillian(qubit_generator())
        spec = spectral_decompose(lv)
        for lam, r, ell in zip(spec.eigenvalues, spec.right, spec.left):
            right_res = np.max(np.abs(devectorize(lv @ vectorize(r)) - lam * r))
            left_res = np.max(np.abs(devectorize(dagger(lv) @ vectorize(ell))
                                     - np.conj(lam) * ell))
            assert right_res < 1e-8 and left_res < 1e-8

    def test_biorthogonality(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator(g=1.7)))
        for j, ell in enumerate(spec.left):
            for k, r in enumerate(spec.right):
                pairing = np.sum(ell.conj() * r)
                target = spec.normalizers[j] if j == k else 0.0
                assert abs(pairing - target) < 1e-8

    def test_degenerate_flag_amplitude_damping(self):
        gen = LindbladGenerator(np.zeros((2, 2)),
                                (np.array([[0, 1], [0, 0]], dtype=complex),))
        spec = spectral_decompose(build_liouvillian(gen))
        assert spec.degenerate


class TestSteadyState:
    def test_symmetric_qubit_maximally_mixed(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        assert matrices_close(steady_state(spec), 0.5 * np.eye(2), 1e-10)

    @pytest.mark.parametrize("n", list(range(1, 26)))
    def test_diagonal_in_spin_basis(self, n):
        params = DickeParams(Omega=1.0, omega=0.7, g=1.3, kappa=1.0, N=n)
        spec = spectral_decompose(build_liouvillian(lindblad_generator(params)))
        rho_ss = steady_state(spec)
        off = np.abs(rho_ss - np.diag(np.diagonal(rho_ss)))
        assert np.max(off) < 1e-8

    def test_amplitude_damping_dark_state(self):
        gen = LindbladGenerator(np.zeros((2, 2)),
                                (np.array([[0, 1], [0, 0]], dtype=complex),))
        spec = spectral_decompose(build_liouvillian(gen))
        assert matrices_close(steady_state(spec), np.diag([1.0, 0.0]), 1e-10)

    def test_fixed_point_residual(self):
        lv = build_liouvillian(qubit_generator(g=2.4))
        rho_ss = steady_state(spectral_decompose(lv))
        assert np.max(np.abs(lv @ vectorize(rho_ss))) < 1e-8


class TestOverlapCoefficients:
    def test_identity_component_is_one(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        coeffs = overlap_coeffs(spec, bloch_state((0.4, 0.4, RZ)))
        assert abs(coeffs[0] - 1.0) < 1e-10

    def test_population_mode_reads_r_z(self):
        params = SymmetricQubitParams(p=1.0, g=3.0, r_x=0.4, r_z=RZ)
        spec = analytic_spectrum(params)
        coeffs = overlap_coeffs(spec, bloch_state((0.4, 0.4, RZ)))
        assert abs(coeffs[3] - (-RZ)) < 1e-10

    def test_coherence_modes_match_closed_forms(self):
        g, p, rx = 3.0, 1.0, 0.4
        q = math.sqrt(g**4 - 25 * p**4)
        params = SymmetricQubitParams(p=p, g=g, r_x=rx, r_z=RZ)
        spec = analytic_spectrum(params)
        coeffs = overlap_coeffs(spec, bloch_state((rx, rx, RZ)))
        c3 = (0.5 - 0.5j) * (-1j * q + g**2 - 5 * p**2) * rx / g**2
        c4 = (0.5 + 0.5j) * (q - 1j * g**2 + 5j * p**2) * rx / g**2
        assert abs(coeffs[2] - c3) < 1e-10
        assert abs(coeffs[1] - c4) < 1e-10

    def test_matches_trace_pairing(self):
        rng = np.random.default_rng(43)
        gen = random_generator(rng, dim=3)
        spec = spectral_decompose(build_liouvillian(gen))
        rho = random_state(rng, 3)
        coeffs = overlap_coeffs(spec, rho)
        direct = np.einsum("ijk,jk->i", spec.left.conj(), rho)
        assert np.max(np.abs(coeffs - direct)) < 1e-10

    def test_steady_state_has_no_decaying_components(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        coeffs = overlap_coeffs(spec, steady_state(spec))
        assert np.max(np.abs(coeffs[1:])) < 1e-9

    def test_rejects_unnormalized_state(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        with pytest.raises(ValueError, match="unit trace"):
            overlap_coeffs(spec, np.eye(2))


class TestEvolve:
    def test_time_zero_identity(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        rho0 = bloch_state((0.4, 0.4, RZ))
        assert matrices_close(evolve(spec, overlap_coeffs(spec, rho0), 0.0),
                              rho0, 1e-9)

    def test_long_time_reaches_steady_state(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        rho0 = bloch_state((0.4, 0.4, RZ))
        rho_late = evolve(spec, overlap_coeffs(spec, rho0), 50.0 / spec.gap)
        assert matrices_close(rho_late, steady_state(spec), 1e-8)

    def test_matches_closed_form_state(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        rho0 = bloch_state((0.4, 0.4, RZ))
        coeffs = overlap_coeffs(spec, rho0)
        params = SymmetricQubitParams(p=1.0, g=3.0, r_x=0.4, r_z=RZ)
        for t in (0.5, 1.0, 2.0):
            assert matrices_close(evolve(spec, coeffs, t), analytic_rho_t(params, t),
                                  1e-9)

    def test_trace_hermiticity_positivity_on_grid(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator(g=1.0)))
        rho0 = bloch_state((0.4, 0.4, RZ))
        states = evolve_grid(spec, overlap_coeffs(spec, rho0), np.linspace(0, 20, 200))
        for state in states:
            assert abs(np.trace(state) - 1.0) < 1e-9
            assert np.max(np.abs(state - dagger(state))) < 1e-10
            assert np.min(np.linalg.eigvalsh(state)) > -1e-8

    def test_initial_state_independent_limit(self):
        rng = np.random.default_rng(47)
        spec = spectral_decompose(build_liouvillian(qubit_generator(g=2.0)))
        t_late = 50.0 / spec.gap
        final = [evolve(spec, overlap_coeffs(spec, random_state(rng, 2)), t_late)
                 for _ in range(2)]
        assert matrices_close(final[0], final[1], 1e-7)

    def test_refuses_degenerate_spectrum(self):
        gen = LindbladGenerator(np.zeros((2, 2)),
                                (np.array([[0, 1], [0, 0]], dtype=complex),))
        spec = spectral_decompose(build_liouvillian(gen))
        with pytest.raises(DegenerateSpectrumError):
            evolve(spec, np.array([1, 0, 0, 0], dtype=complex), 1.0)

    def test_negative_time_rejected(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        coeffs = overlap_coeffs(spec, bloch_state((0, 0, 0.5)))
        with pytest.raises(ValueError):
            evolve(spec, coeffs, -1.0)


class TestOdeOracle:
    def test_unitary_precession(self):
        gen = LindbladGenerator(SIGMA_Z, ())
        plus = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
        rho = evolve_ode(gen, plus, math.pi, 1e-4)
        x_expectation = np.trace(SIGMA_X @ rho).real
        assert abs(x_expectation - 1.0) < 1e-8

    def test_matches_spectral_evolution(self):
        gen = qubit_generator()
        spec = spectral_decompose(build_liouvillian(gen))
        rho0 = bloch_state((0.4, 0.4, RZ))
        spectral = evolve(spec, overlap_coeffs(spec, rho0), 1.0)
        ode = evolve_ode(gen, rho0, 1.0, 1e-4)
        assert np.max(np.abs(spectral - ode)) < 1e-7

    def test_trace_preservation(self):
        gen = qubit_generator(g=1.0)
        rho0 = bloch_state((0.4, 0.4, RZ))
        states = evolve_ode_sampled(gen, rho0, np.linspace(1.0, 10.0, 10), 1e-3)
        for state in states:
            assert abs(np.trace(state) - 1.0) < 1e-9

    def test_unstable_step_raises(self):
        gen = LindbladGenerator(30.0 * SIGMA_Z, (2.0 * SIGMA_X,))
        rho0 = bloch_state((0.4, 0.4, RZ))
        with np.errstate(invalid="ignore", over="ignore"):
            with pytest.raises(NumericFailure, match="decrease dt"):
                evolve_ode(gen, rho0, 50.0, 0.5)

    def test_time_zero_copy(self):
        gen = qubit_generator()
        rho0 = bloch_state((0.1, 0.2, 0.3))
        assert matrices_close(evolve_ode(gen, rho0, 0.0, 1e-3), rho0, 0.0)


class TestSpectrumSerialization:
    def test_roundtrip(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator(g=2.2)))
        data = json.loads(json.dumps(spectrum_to_dict(spec)))
        back = spectrum_from_dict(data)
        assert np.array_equal(back.eigenvalues, spec.eigenvalues)
        assert np.array_equal(back.right, spec.right)
        assert np.array_equal(back.left, spec.left)
        assert back.gap == spec.gap and back.dim == spec.dim

    def test_version_check(self):
        spec = spectral_decompose(build_liouvillian(qubit_generator()))
        data = spectrum_to_dict(spec)
        data["version"] = 99
        with pytest.raises(ValueError, match="version"):
            spectrum_from_dict(data)
