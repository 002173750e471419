"""Closed-form solutions for the symmetric-parameter qubit model.

For a single spin (N = 1) with Omega = omega = kappa =: p the
Liouvillian diagonalizes in closed form with q = sqrt(g^4 - 25 p^4).
This module carries those exact eigenvalues, eigenmatrices, overlap
coefficients and l1-coherence trajectories, plus the sufficient
condition for the coherence Mpemba effect.  It is the ground-truth
oracle for the numerical stack.

Eigenvalue labels follow the closed-form convention

    lambda_1 = 0,  lambda_2 = -2 g^2/(5p),
    lambda_3 = (-q - g^2)/(5p),  lambda_4 = (q - g^2)/(5p),

which is *not* sorted by descending real part: for real q > 0 the
descending order is (lambda_1, lambda_4, lambda_3, lambda_2).  The
permutation LABEL_TO_SORTED converts label order to sorted order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedRegimeError
from .linops import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z
from .liouville import LiouvilleSpectrum

# label order -> descending-real-part order (self-inverse)
LABEL_TO_SORTED = (0, 3, 2, 1)


@dataclass(frozen=True)
class SymmetricQubitParams:
    """Qubit model with Omega = omega = kappa = p, plus the initial-state
    Bloch components (r_y = r_x) and the rotation angle beta."""

    p: float
    g: float
    beta: float = 0.0
    r_x: float = 0.0
    r_z: float = 0.0

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if 2.0 * self.r_x**2 + self.r_z**2 > 1.0 + 1e-12:
            raise ValueError("Bloch vector (r_x, r_x, r_z) lies outside the ball")

    @property
    def q_squared(self) -> float:
        return self.g**4 - 25.0 * self.p**4

    @property
    def in_criterion_regime(self) -> bool:
        """True when g > sqrt(5) p, i.e. q is real and positive."""
        return self.q_squared > 0.0

    @property
    def q(self) -> float:
        """Real q; raises outside the g > sqrt(5) p regime."""
        if not self.in_criterion_regime:
            raise UnsupportedRegimeError(
                f"q^2 = {self.q_squared} <= 0; closed forms need g > sqrt(5) p")
        return math.sqrt(self.q_squared)


def analytic_eigenvalues(params: SymmetricQubitParams) -> np.ndarray:
    """The four eigenvalues in label order (complex q is allowed here)."""
    p, g = params.p, params.g
    q = cmath.sqrt(complex(params.q_squared))
    return np.array([
        0.0,
        -2.0 * g**2 / (5.0 * p),
        (-q - g**2) / (5.0 * p),
        (q - g**2) / (5.0 * p),
    ], dtype=complex)


def _coherence_mode_matrices(params: SymmetricQubitParams):
    """Right/left eigenmatrices and normalizers of the two coherence modes,
    in label order (index 3 then 4), normalized as in the closed forms."""
    p, g = params.p, params.g
    q = params.q
    w_minus = (q - 5.0j * p**2) / g**2
    w_plus = (q + 5.0j * p**2) / g**2
    r3 = np.array([[0.0, 1.0], [-w_minus, 0.0]], dtype=complex)
    l3 = np.array([[0.0, 1.0], [-w_plus, 0.0]], dtype=complex)
    r4 = np.array([[0.0, 1.0], [w_plus, 0.0]], dtype=complex)
    l4 = np.array([[0.0, 1.0], [w_minus, 0.0]], dtype=complex)
    k3 = 1.0 + (q - 5.0j * p**2) ** 2 / g**4
    k4 = 1.0 + (q + 5.0j * p**2) ** 2 / g**4
    return (r3, l3, k3), (r4, l4, k4)


def analytic_spectrum(params: SymmetricQubitParams) -> LiouvilleSpectrum:
    """Exact spectral data as a LiouvilleSpectrum (sorted order)."""
    vals = analytic_eigenvalues(params)[list(LABEL_TO_SORTED)]
    if not params.in_criterion_regime:
        raise UnsupportedRegimeError(
            "exact eigenmatrices are implemented for g > sqrt(5) p only")
    (r3, l3, k3), (r4, l4, k4) = _coherence_mode_matrices(params)
    right = np.stack([IDENTITY_2, r4, r3, -SIGMA_Z])
    left = np.stack([IDENTITY_2, l4, l3, -SIGMA_Z])
    normalizers = np.array([2.0, k4, k3, 2.0], dtype=complex)
    return LiouvilleSpectrum(
        eigenvalues=vals, right=right, left=left, normalizers=normalizers,
        gap=float(-vals[1].real), degenerate=False, dim=2,
    )


def analytic_overlap_coeffs(params: SymmetricQubitParams) -> np.ndarray:
    """c_i = Tr(l_i^dag rho_0) in label order, for r_y = r_x."""
    p, g, rx, rz = params.p, params.g, params.r_x, params.r_z
    q = params.q
    c3 = (0.5 - 0.5j) * (-1.0j * q + g**2 - 5.0 * p**2) * rx / g**2
    c4 = (0.5 + 0.5j) * (q - 1.0j * g**2 + 5.0j * p**2) * rx / g**2
    return np.array([1.0, -rz, c3, c4], dtype=complex)


def analytic_overlap_coeffs_rotated(params: SymmetricQubitParams) -> np.ndarray:
    """c'_i for the state rotated by exp(i beta sigma_z), in label order."""
    p, g, rx, rz, beta = params.p, params.g, params.r_x, params.r_z, params.beta
    q = params.q
    ph2 = cmath.exp(-2.0j * beta)
    ph4 = cmath.exp(4.0j * beta)
    c3 = (0.5 - 0.5j) * ph2 * (-1.0j * q + g**2 * ph4 - 5.0 * p**2) * rx / g**2
    c4 = (0.5 + 0.5j) * ph2 * (q - 1.0j * g**2 * ph4 + 5.0j * p**2) * rx / g**2
    return np.array([1.0, -rz, c3, c4], dtype=complex)


def alpha_coefficients(params: SymmetricQubitParams) -> tuple[np.ndarray, np.ndarray]:
    """(alpha_x)_i = Tr(l_i^dag sigma_x) and the sigma_y analogue, label order."""
    (_, l3, _), (_, l4, _) = _coherence_mode_matrices(params)
    label_order_left = [IDENTITY_2, -SIGMA_Z, l3, l4]
    alpha_x = np.array([np.sum(l.conj() * SIGMA_X) for l in label_order_left])
    alpha_y = np.array([np.sum(l.conj() * SIGMA_Y) for l in label_order_left])
    return alpha_x, alpha_y


def rotate_overlap_coeffs(coeffs: np.ndarray, alpha_x: np.ndarray, alpha_y: np.ndarray,
                     beta: float, r_x: float, r_y: float) -> np.ndarray:
    """Overlap coefficients after rotating the initial state by
    exp(i beta sigma_z):

        c'_i = c_i + sin(beta) [ (alpha_x)_i (r_y cos(beta) - r_x sin(beta))
                                - (alpha_y)_i (r_y sin(beta) + r_x cos(beta)) ]
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    sb, cb = math.sin(beta), math.cos(beta)
    return coeffs + sb * (np.asarray(alpha_x) * (r_y * cb - r_x * sb)
                          - np.asarray(alpha_y) * (r_y * sb + r_x * cb))


def to_sorted_order(values: np.ndarray) -> np.ndarray:
    """Reorder a label-ordered 4-vector into descending-real-part order."""
    values = np.asarray(values)
    if values.shape[0] != 4:
        raise ValueError("expected a 4-component array in label order")
    return values[list(LABEL_TO_SORTED)]


def analytic_rho_t(params: SymmetricQubitParams, t: float) -> np.ndarray:
    """Exact evolved state of the unrotated initial state (r_y = r_x)."""
    p, g, rx, rz = params.p, params.g, params.r_x, params.r_z
    q = params.q
    x = t * q / (5.0 * p)
    decay_pop = math.exp(max(-2.0 * g**2 * t / (5.0 * p), -745.0))
    decay_coh = math.exp(max(-(g**2) * t / (5.0 * p), -745.0))
    gp = g**2 + 5.0 * p**2
    off_01 = (1.0 + 1.0j) * rx * decay_coh * (
        q * math.sinh(x) - 1.0j * gp * math.cosh(x)) / (2.0 * gp)
    off_10 = (1.0 + 1.0j) * rx * decay_coh * (
        gp * math.cosh(x) - 1.0j * q * math.sinh(x)) / (2.0 * gp)
    return np.array([
        [0.5 * (1.0 + rz * decay_pop), off_01],
        [off_10, 0.5 * (1.0 - rz * decay_pop)],
    ], dtype=complex)


def _overall_decay(params: SymmetricQubitParams, t) -> np.ndarray:
    # exp((q - g^2) t / 5p), the slowest surviving coherence decay
    t = np.asarray(t, dtype=float)
    return np.exp((params.q - params.g**2) * t / (5.0 * params.p))


def _snapped_sines(beta: float, atol: float = 1e-12) -> tuple[float, float]:
    # sin(4 beta) and sin(2 beta) with round-off snapped to exact zero;
    # growing exponentials would otherwise amplify the noise at the
    # special angles where these vanish identically
    s4 = math.sin(4.0 * beta)
    s2 = math.sin(2.0 * beta)
    return (0.0 if abs(s4) <= atol else s4, 0.0 if abs(s2) <= atol else s2)


def analytic_l1(params: SymmetricQubitParams, t) -> np.ndarray:
    """l1 coherence of the unrotated state; overflow-safe for large t."""
    p, g = params.p, params.g
    q = params.q
    t = np.asarray(t, dtype=float)
    e_inv = np.exp(-2.0 * t * q / (5.0 * p))
    bracket = (g**2 * (1.0 + e_inv**2) / 2.0 + 5.0 * p**2 * e_inv) / (g**2 + 5.0 * p**2)
    return math.sqrt(2.0) * abs(params.r_x) * _overall_decay(params, t) * np.sqrt(bracket)


def analytic_l1_prime(params: SymmetricQubitParams, t) -> np.ndarray:
    """l1 coherence of the beta-rotated state; overflow-safe for large t."""
    p, g, beta = params.p, params.g, params.beta
    q = params.q
    t = np.asarray(t, dtype=float)
    e_inv = np.exp(-2.0 * t * q / (5.0 * p))
    s4, _ = _snapped_sines(beta)
    c4 = math.cos(4.0 * beta)
    bracket = (g**4 * (1.0 + e_inv**2)
               + g**2 * q * s4 * (1.0 - e_inv**2)
               - 5.0 * g**2 * p**2 * c4 * (1.0 - e_inv)**2
               - 50.0 * p**4 * e_inv)
    return (math.sqrt(2.0) * abs(params.r_x) * _overall_decay(params, t)
            * np.sqrt(np.maximum(bracket, 0.0) / 2.0) / q)


def analytic_l1_difference(params: SymmetricQubitParams, t) -> np.ndarray:
    """l1(rotated) - l1(unrotated) at time t."""
    return analytic_l1_prime(params, t) - analytic_l1(params, t)


def squared_coherence_excess(params: SymmetricQubitParams, t) -> np.ndarray:
    """Scaled difference of the squared rotated/unrotated coherences,

        g^2 (q sin(4b) sinh(2tq/5p) + 20 p^2 sin^2(2b) sinh^2(tq/5p)) / q^2,

    positive exactly when the rotated state is the more coherent one."""
    p, g, beta = params.p, params.g, params.beta
    q = params.q
    t = np.asarray(t, dtype=float)
    big = np.exp(2.0 * t * q / (5.0 * p))
    e_inv = 1.0 / big
    s4, s2 = _snapped_sines(beta)
    return (g**2 * big / q**2) * (q * s4 * (1.0 - e_inv**2) / 2.0
                                  + 5.0 * p**2 * s2**2 * (1.0 - e_inv)**2)


def mpemba_sufficient_condition(params: SymmetricQubitParams, *, atol: float = 1e-12) -> bool:
    """Sufficient condition for the coherence Mpemba effect: g > sqrt(5) p
    and the rotation angle keeps the squared-coherence excess positive
    for every t > 0.

    The angle condition is sin(4 beta) > 0, or sin(4 beta) = 0 with
    sin(2 beta) != 0 (window boundaries included).
    """
    if params.g <= math.sqrt(5.0) * params.p:
        return False
    s4, s2 = _snapped_sines(params.beta, atol)
    if s4 > 0.0:
        return True
    return s4 == 0.0 and s2 != 0.0
