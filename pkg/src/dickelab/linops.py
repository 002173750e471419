"""Dense complex linear algebra and collective spin operators.

All states and operators are plain complex numpy arrays.  The spin
operators act on the maximal-spin sector of N spin-1/2 particles
(total spin s = N/2, dimension N + 1), ordered by decreasing S_z
eigenvalue m = s, s-1, ..., -s.  hbar = 1 throughout.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

DEFAULT_ATOL = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conjugate(np.asarray(a)).T


def matrices_close(a: np.ndarray, b: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    """Entrywise equality within an absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= atol) if a.size else True


def is_hermitian(a: np.ndarray, atol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and matrices_close(a, dagger(a), atol)


def _require_square(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square, got shape {a.shape}")
    return a


def _require_spin_count(num_spins: int) -> int:
    if not isinstance(num_spins, (int, np.integer)) or num_spins < 1:
        raise ValueError(f"spin count must be a positive integer, got {num_spins!r}")
    return int(num_spins)


def spin_z(num_spins: int) -> np.ndarray:
    """Collective S_z = diag(s, s-1, ..., -s) with s = num_spins/2."""
    n = _require_spin_count(num_spins)
    s = n / 2.0
    return np.diag(s - np.arange(n + 1)).astype(complex)


def _ladder_coefficients(num_spins: int) -> np.ndarray:
    # c_j = sqrt(s(s+1) - m_j(m_j + 1)) with m_j = s - j for j = 1..N,
    # the matrix element connecting |m_j> to |m_j + 1>.
    n = _require_spin_count(num_spins)
    s = n / 2.0
    m = s - np.arange(1, n + 1)
    return np.sqrt(s * (s + 1) - m * (m + 1))


def spin_x(num_spins: int) -> np.ndarray:
    """Collective S_x in the S_z eigenbasis; real symmetric tridiagonal."""
    c = 0.5 * _ladder_coefficients(num_spins)
    return (np.diag(c, 1) + np.diag(c, -1)).astype(complex)


def spin_y(num_spins: int) -> np.ndarray:
    """Collective S_y = (S_+ - S_-)/(2i), consistent with spin_x."""
    c = 0.5 * _ladder_coefficients(num_spins)
    return -1.0j * np.diag(c, 1) + 1.0j * np.diag(c, -1)


class BlochVector(NamedTuple):
    r_x: float
    r_y: float
    r_z: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.r_x**2 + self.r_y**2 + self.r_z**2)


def bloch_state(b, atol: float = DEFAULT_ATOL) -> np.ndarray:
    """Qubit density matrix (I + r . sigma)/2 for a Bloch vector inside the ball."""
    b = BlochVector(*b)
    if b.norm > 1.0 + atol:
        raise ValueError(f"Bloch vector norm {b.norm} exceeds 1")
    return 0.5 * (IDENTITY_2 + b.r_x * SIGMA_X + b.r_y * SIGMA_Y + b.r_z * SIGMA_Z)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with (i*dimB + k, j*dimB + l) index convention."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vectorize(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, so that vec(AXB) = (B^T kron A) vec(X)."""
    a = _require_square(a)
    return a.reshape(-1, order="F")


def devectorize(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of vectorize."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    if dim is not None and dim != d:
        raise ValueError(f"requested dim {dim} inconsistent with length {v.size}")
    return v.reshape((d, d), order="F")


def partial_transpose(rho: np.ndarray, dim_a: int, dim_b: int,
                      subsystem: str = "A") -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator on C^dim_a x C^dim_b."""
    rho = _require_square(rho, "state")
    if dim_a < 1 or dim_b < 1 or rho.shape[0] != dim_a * dim_b:
        raise ValueError(
            f"dimension {rho.shape[0]} does not factor as {dim_a} x {dim_b}")
    r = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if subsystem == "A":
        r = r.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        r = r.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return r.reshape(dim_a * dim_b, dim_a * dim_b)


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values, Tr sqrt(A^dag A)."""
    a = _require_square(a)
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def validate_density_matrix(rho: np.ndarray, *, herm_atol: float = 1e-10,
                            trace_atol: float = 1e-10,
                            eig_atol: float = 1e-10) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the input.

    Raises ValueError on violation.  Eigenvalues down to -eig_atol are
    tolerated as round-off.
    """
    rho = _require_square(rho, "density matrix")
    herm_dev = float(np.max(np.abs(rho - dagger(rho))))
    if herm_dev > herm_atol:
        raise ValueError(f"state is not Hermitian (deviation {herm_dev:.3e})")
    tr_dev = abs(np.trace(rho) - 1.0)
    if tr_dev > trace_atol:
        raise ValueError(f"state trace deviates from 1 by {tr_dev:.3e}")
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))))
    if min_eig < -eig_atol:
        raise ValueError(f"state has negative eigenvalue {min_eig:.3e}")
    return rho
