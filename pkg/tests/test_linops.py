import math

import numpy as np
import pytest

from dickelab.linops import (BlochVector, bloch_state, dagger, devectorize, kron,
                             matrices_close, partial_transpose, spin_x, spin_y,
                             spin_z, trace_norm, validate_density_matrix, vectorize)


class TestSpinOperators:
    def test_spin_z_small(self):
        assert matrices_close(spin_z(1), np.diag([0.5, -0.5]))
        assert matrices_close(spin_z(2), np.diag([1.0, 0.0, -1.0]))
        assert matrices_close(spin_z(3), np.diag([1.5, 0.5, -0.5, -1.5]))

    def test_spin_x_qubit(self):
        assert matrices_close(spin_x(1), 0.5 * np.array([[0, 1], [1, 0]]))

    def test_spin_x_two_spins(self):
        expected = np.zeros((3, 3))
        expected[0, 1] = expected[1, 0] = expected[1, 2] = expected[2, 1] = 1 / math.sqrt(2)
        assert matrices_close(spin_x(2), expected)

    def test_spin_y_qubit(self):
        assert matrices_close(spin_y(1), 0.5 * np.array([[0, -1j], [1j, 0]]))

    def test_spin_y_two_spins(self):
        expected = np.zeros((3, 3), dtype=complex)
        expected[0, 1] = expected[1, 2] = -1j / math.sqrt(2)
        expected[1, 0] = expected[2, 1] = 1j / math.sqrt(2)
        assert matrices_close(spin_y(2), expected)

    @pytest.mark.parametrize("n", [0, -1])
    def test_invalid_spin_count(self, n):
        for op in (spin_z, spin_x, spin_y):
            with pytest.raises(ValueError):
                op(n)

    @pytest.mark.parametrize("n", range(1, 41))
    def test_hermitian(self, n):
        for op in (spin_z, spin_x, spin_y):
            mat = op(n)
            assert np.max(np.abs(mat - dagger(mat))) < 1e-12

    @pytest.mark.parametrize("n", range(1, 31))
    def test_casimir(self, n):
        sx, sy, sz = spin_x(n), spin_y(n), spin_z(n)
        total = sx @ sx + sy @ sy + sz @ sz
        expected = (n / 4) * (n + 2) * np.eye(n + 1)
        assert np.max(np.abs(total - expected)) < 1e-10


class TestBlochState:
    def test_poles_and_center(self):
        assert matrices_close(bloch_state((0, 0, 1)), np.diag([1.0, 0.0]))
        assert matrices_close(bloch_state((0, 0, 0)), 0.5 * np.eye(2))

    def test_equatorial_offdiagonal(self):
        rho = bloch_state((0.4, 0.4, math.sqrt(0.68)))
        assert abs(rho[0, 1] - (0.4 - 0.4j) / 2) < 1e-15
        assert abs(rho[1, 0] - (0.4 + 0.4j) / 2) < 1e-15

    def test_outside_ball_rejected(self):
        with pytest.raises(ValueError):
            bloch_state((0.8, 0.8, 0.8))

    def test_random_interior_points_are_states(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            vec = rng.standard_normal(3)
            vec *= rng.uniform(0.0, 1.0) / np.linalg.norm(vec)
            validate_density_matrix(bloch_state(BlochVector(*vec)))


class TestKron:
    def test_identity(self):
        assert matrices_close(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_x_blocks(self):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0:2, 2:4] = np.eye(2)
        expected[2:4, 0:2] = np.eye(2)
        assert matrices_close(kron(sx, np.eye(2)), expected)

    def test_mixed_product_property(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            a, b, c, d = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                          for _ in range(4))
            assert matrices_close(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), 1e-12)


class TestPartialTranspose:
    def test_product_state(self):
        rho_a = bloch_state((0.3, 0.1, 0.2))
        rho_b = bloch_state((0.0, -0.5, 0.1))
        product = kron(rho_a, rho_b)
        assert matrices_close(partial_transpose(product, 2, 2, "A"),
                              kron(rho_a.T, rho_b), 1e-14)
        assert matrices_close(partial_transpose(product, 2, 2, "B"),
                              kron(rho_a, rho_b.T), 1e-14)

    def test_involution(self):
        rng = np.random.default_rng(5)
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        rho = m @ dagger(m)
        rho /= np.trace(rho)
        twice = partial_transpose(partial_transpose(rho, 2, 3, "A"), 2, 3, "A")
        assert matrices_close(twice, rho, 1e-14)

    def test_bell_state_spectrum(self):
        bell = np.zeros((4, 4), dtype=complex)
        for i in (0, 3):
            for j in (0, 3):
                bell[i, j] = 0.5
        eigs = np.sort(np.linalg.eigvalsh(partial_transpose(bell, 2, 2, "A")))
        assert np.max(np.abs(eigs - np.array([-0.5, 0.5, 0.5, 0.5]))) < 1e-12

    def test_bad_factorization(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(6), 4, 2, "A")


class TestTraceNormAndVec:
    def test_identity_norm(self):
        for n in (1, 3, 7):
            assert abs(trace_norm(np.eye(n)) - n) < 1e-12

    def test_hermitian_diag(self):
        assert abs(trace_norm(np.diag([1.0, -2.0])) - 3.0) < 1e-12

    def test_against_gram_eigenvalues(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        gram_eigs = np.linalg.eigvalsh(dagger(a) @ a)
        assert abs(trace_norm(a) - np.sum(np.sqrt(np.clip(gram_eigs, 0, None)))) < 1e-10

    def test_unitary_invariance(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        u, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        v, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        assert abs(trace_norm(u @ a @ v) - trace_norm(a)) < 1e-10

    def test_vectorize_column_stacking(self):
        assert np.allclose(vectorize(np.eye(2)), np.array([1, 0, 0, 1]))

    def test_roundtrip(self):
        rng = np.random.default_rng(17)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert matrices_close(devectorize(vectorize(a)), a, 0.0)

    def test_vec_identity(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            a, x, b = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                       for _ in range(3))
            lhs = vectorize(a @ x @ b)
            rhs = kron(b.T, a) @ vectorize(x)
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_bad_vector_length(self):
        with pytest.raises(ValueError):
            devectorize(np.arange(5))


class TestValidateDensityMatrix:
    def test_accepts_valid(self):
        validate_density_matrix(0.5 * np.eye(2))

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            validate_density_matrix(np.array([[0.5, 0.1], [0.3, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            validate_density_matrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="negative"):
            validate_density_matrix(np.diag([1.5, -0.5]))
