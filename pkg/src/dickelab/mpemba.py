"""Initial-state transformations, trajectory sampling and Mpemba verdicts.

A Mpemba comparison takes two states with equal initial value of a
relaxation quantifier, evolves both under the same Liouvillian, and
asks which one enters (and stays inside) an epsilon band around the
steady value first.  A role reversal is the same comparison under two
parameter sets with opposite orderings.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import DegenerateSpectrumError, UnitaryConstructionError
from .linops import SIGMA_X, SIGMA_Y, SIGMA_Z, BlochVector, dagger, kron
from .liouville import (LindbladGenerator, LiouvilleSpectrum, build_liouvillian,
                        evolve_grid, overlap_coeffs, spectral_decompose, steady_state)
from .measures import MeasureKind, differential_measure


class Ordering(enum.Enum):
    A_FASTER = "A_faster"
    B_FASTER = "B_faster"
    TIE = "tie"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Trajectory:
    """Sampled differential-measure values of one initial state."""

    times: np.ndarray
    values: np.ndarray
    steady_value: float
    measure: MeasureKind

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1d arrays of equal length")
        if times.size == 0 or times[0] != 0.0:
            raise ValueError("time grid must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def grid_step(self) -> float:
        return float(np.max(np.diff(self.times)))


@dataclass(frozen=True)
class MpembaVerdict:
    initial_equal: bool
    relax_time_a: float | None
    relax_time_b: float | None
    ordering: Ordering
    epsilon: float
    crossing_times: tuple[float, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "initial_equal": self.initial_equal,
            "relax_time_a": self.relax_time_a,
            "relax_time_b": self.relax_time_b,
            "ordering": self.ordering.value,
            "epsilon": self.epsilon,
            "crossing_times": list(self.crossing_times),
        }


@dataclass(frozen=True)
class RoleReversalVerdict:
    verdict_1: MpembaVerdict
    verdict_2: MpembaVerdict
    reversed: bool

    def __post_init__(self):
        opposite = {
            (Ordering.A_FASTER, Ordering.B_FASTER),
            (Ordering.B_FASTER, Ordering.A_FASTER),
        }
        expected = (self.verdict_1.ordering, self.verdict_2.ordering) in opposite
        if self.reversed != expected:
            raise ValueError("reversed flag inconsistent with the two orderings")

    def to_dict(self) -> dict:
        return {
            "verdict_1": self.verdict_1.to_dict(),
            "verdict_2": self.verdict_2.to_dict(),
            "reversed": self.reversed,
        }


def coherence_preserving_unitary(beta: float) -> np.ndarray:
    """exp(i beta sigma_z) = diag(e^{i beta}, e^{-i beta})."""
    return np.diag([cmath.exp(1.0j * beta), cmath.exp(-1.0j * beta)])


def rotated_bloch_state(b, beta: float) -> np.ndarray:
    """U(beta) rho U(beta)^dag in closed form: the Bloch vector rotates by
    -2 beta around z while r_z is left unchanged."""
    b = BlochVector(*b)
    c2, s2 = math.cos(2.0 * beta), math.sin(2.0 * beta)
    rx = b.r_x * c2 + b.r_y * s2
    ry = b.r_y * c2 - b.r_x * s2
    return 0.5 * (np.eye(2, dtype=complex) + rx * SIGMA_X + ry * SIGMA_Y + b.r_z * SIGMA_Z)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1.0j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_local_unitary(seed: int, dim_a: int, dim_b: int) -> np.ndarray:
    """Seeded U_A kron U_B with independent Haar-distributed factors."""
    rng = np.random.default_rng(seed)
    return kron(_haar_unitary(rng, dim_a), _haar_unitary(rng, dim_b))


def haar_random_pure_state(seed: int, dim: int) -> np.ndarray:
    """Seeded Haar-random pure density matrix from a normalized complex
    Gaussian vector."""
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1.0j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def _pure_state_vector(rho: np.ndarray, atol: float = 1e-8) -> np.ndarray:
    eigs, vecs = np.linalg.eigh(0.5 * (rho + dagger(rho)))
    if abs(eigs[-1] - 1.0) > atol or np.any(np.abs(eigs[:-1]) > atol):
        raise ValueError("initial state must be pure")
    return vecs[:, -1]


def _rephase_hermitian(mat: np.ndarray) -> tuple[np.ndarray, float]:
    """Multiply by a phase so the result is (as close as possible to)
    Hermitian; returns the rephased matrix and its Hermiticity residual."""
    norm_sq = np.vdot(mat, mat).real
    overlap = np.vdot(mat, dagger(mat))
    if norm_sq <= 0.0:
        return mat, np.inf
    phase = cmath.exp(0.5j * cmath.phase(overlap / norm_sq))
    out = phase * mat
    residual = float(np.max(np.abs(out - dagger(out)))) / max(
        1.0, float(np.max(np.abs(out))))
    return out, residual


def _rotation_between(psi: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Unitary acting as a rotation in span{psi, target}, identity elsewhere."""
    dim = psi.size
    overlap = np.vdot(psi, target)
    rest = target - overlap * psi
    rest_norm = np.linalg.norm(rest)
    if rest_norm < 1e-14:
        return np.eye(dim, dtype=complex)
    e = rest / rest_norm
    u = np.eye(dim, dtype=complex)
    u -= np.outer(psi, psi.conj()) + np.outer(e, e.conj())
    u += np.outer(overlap * psi + rest_norm * e, psi.conj())
    u += np.outer(-rest_norm * psi + np.conj(overlap) * e, e.conj())
    return u


def _two_angle_fallback(ell: np.ndarray, psi: np.ndarray,
                        target_atol: float) -> np.ndarray:
    """Bounded minimization of |Tr(l_2^dag U rho U^dag)| over rotations of
    psi toward two fixed orthonormal directions."""
    herm = 0.5 * (ell + dagger(ell))
    _, vecs = np.linalg.eigh(herm)
    basis = []
    for idx in range(vecs.shape[1] - 1, -1, -1):
        cand = vecs[:, idx] - np.vdot(psi, vecs[:, idx]) * psi
        for prev in basis:
            cand = cand - np.vdot(prev, cand) * prev
        norm = np.linalg.norm(cand)
        if norm > 1e-8:
            basis.append(cand / norm)
        if len(basis) == 2:
            break
    if len(basis) < 2:
        raise UnitaryConstructionError("state space too small for the fallback search")
    e1, e2 = basis

    def overlap_mag(angles):
        th1, th2 = angles
        w = (math.cos(th1) * psi
             + math.sin(th1) * (math.cos(th2) * e1 + math.sin(th2) * e2))
        w = w / np.linalg.norm(w)
        return abs(np.vdot(w, ell @ w))

    best = None
    for th1_0 in (0.3, 0.8, 1.3):
        for th2_0 in (0.5, 2.0, 4.0):
            res = minimize(overlap_mag, x0=[th1_0, th2_0], method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
            if best is None or res.fun < best.fun:
                best = res
    if best is None or best.fun > 1e-6:
        raise UnitaryConstructionError(
            f"two-angle minimization floor {best.fun if best else 'n/a'} exceeds 1e-6")
    th1, th2 = best.x
    w = (math.cos(th1) * psi
         + math.sin(th1) * (math.cos(th2) * e1 + math.sin(th2) * e2))
    w = w / np.linalg.norm(w)
    return _rotation_between(psi, w)


def slowest_mode_elimination_unitary(spectrum: LiouvilleSpectrum, rho0: np.ndarray,
                                     *, target_atol: float = 1e-8) -> np.ndarray:
    """Unitary U that removes the overlap of a pure state with the slowest
    decaying Liouvillian mode: |Tr(l_2^dag U rho_0 U^dag)| < target_atol.

    The state is rotated onto a combination of two l_2 eigenvectors whose
    eigenvalues bracket zero; the mixing angle is found by an
    intermediate-value root search.  A bounded two-angle minimization is
    used when l_2 cannot be rephased Hermitian.
    """
    if spectrum.degenerate:
        raise DegenerateSpectrumError(
            "slowest-mode elimination assumes a non-degenerate spectrum")
    lam2 = spectrum.eigenvalues[1]
    if abs(lam2.imag) > 1e-9:
        raise ValueError(f"slowest nonzero mode must be real, got {lam2}")
    psi = _pure_state_vector(np.asarray(rho0, dtype=complex))
    ell = spectrum.left[1]

    def mode_overlap(u):
        rho = u @ np.outer(psi, psi.conj()) @ dagger(u)
        return abs(np.sum(ell.conj() * rho))

    eye = np.eye(spectrum.dim, dtype=complex)
    if mode_overlap(eye) < target_atol:
        return eye

    ell_h, residual = _rephase_hermitian(ell)
    if residual > 1e-8:
        unitary = _two_angle_fallback(ell, psi, target_atol)
    else:
        ell_h = 0.5 * (ell_h + dagger(ell_h))
        mu, vecs = np.linalg.eigh(ell_h)
        kernel_idx = int(np.argmin(np.abs(mu)))
        if abs(mu[kernel_idx]) <= 1e-12 * np.max(np.abs(mu)):
            target = vecs[:, kernel_idx]
        elif mu[0] < 0.0 < mu[-1]:
            v_minus, v_plus = vecs[:, 0], vecs[:, -1]

            def expectation(theta):
                return math.cos(theta) ** 2 * mu[-1] + math.sin(theta) ** 2 * mu[0]

            theta_star = brentq(expectation, 0.0, math.pi / 2.0, xtol=1e-15)
            target = math.cos(theta_star) * v_plus + math.sin(theta_star) * v_minus
        else:
            raise UnitaryConstructionError(
                "mode expectations neither bracket nor reach zero")
        unitary = _rotation_between(psi, target)

    if np.max(np.abs(unitary @ dagger(unitary) - eye)) > 1e-10:
        raise UnitaryConstructionError("constructed operator is not unitary")
    if mode_overlap(unitary) > target_atol:
        raise UnitaryConstructionError(
            f"residual slowest-mode overlap {mode_overlap(unitary):.3e} "
            f"exceeds {target_atol}")
    return unitary


def sample_trajectory(spectrum: LiouvilleSpectrum, gen: LindbladGenerator,
                      rho0: np.ndarray, measure: MeasureKind, t_grid,
                      bipartition: tuple[int, int] | None = None) -> Trajectory:
    """Differential-measure values of one initial state on a time grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    if gen.dim != spectrum.dim:
        raise ValueError("generator and spectrum dimensions differ")
    rho_ss = steady_state(spectrum)
    states = evolve_grid(spectrum, overlap_coeffs(spectrum, rho0), t_grid)
    values = np.array([
        differential_measure(measure, state, rho_ss, bipartition) for state in states
    ])
    steady_value = differential_measure(measure, rho_ss, rho_ss, bipartition)
    return Trajectory(times=t_grid, values=values, steady_value=steady_value,
                      measure=measure)


def relaxation_time(traj: Trajectory, epsilon: float) -> float | None:
    """Earliest sampled time after which |value - steady| stays below
    epsilon for the rest of the grid (permanent entry into the band);
    None when the trajectory never settles."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    outside = np.abs(traj.values - traj.steady_value) >= epsilon
    if not np.any(outside):
        return float(traj.times[0])
    last_outside = int(np.max(np.nonzero(outside)[0]))
    if last_outside + 1 >= traj.times.size:
        return None
    return float(traj.times[last_outside + 1])


def _crossing_times(traj_a: Trajectory, traj_b: Trajectory) -> tuple[float, ...]:
    diff = traj_a.values - traj_b.values
    sign = np.sign(diff)
    crossings = []
    prev_idx = None
    for idx in range(diff.size):
        if sign[idx] == 0:
            continue
        if prev_idx is not None and sign[idx] * sign[prev_idx] < 0:
            t0, t1 = traj_a.times[prev_idx], traj_a.times[idx]
            d0, d1 = diff[prev_idx], diff[idx]
            crossings.append(float(t0 + (t1 - t0) * d0 / (d0 - d1)))
        prev_idx = idx
    return tuple(crossings)


def detect_mpemba(traj_a: Trajectory, traj_b: Trajectory, epsilon: float,
                  tol_init: float = 1e-9) -> MpembaVerdict:
    """Compare the relaxation of two trajectories on the same grid."""
    if traj_a.measure is not traj_b.measure:
        raise ValueError("trajectories measure different quantities")
    if traj_a.times.shape != traj_b.times.shape or np.any(traj_a.times != traj_b.times):
        raise ValueError("trajectories must share one time grid")
    initial_equal = bool(abs(traj_a.values[0] - traj_b.values[0]) < tol_init)
    t_a = relaxation_time(traj_a, epsilon)
    t_b = relaxation_time(traj_b, epsilon)
    step = traj_a.grid_step
    if t_a is None and t_b is None:
        ordering = Ordering.UNDETERMINED
    elif t_a is None:
        ordering = Ordering.B_FASTER
    elif t_b is None:
        ordering = Ordering.A_FASTER
    elif abs(t_a - t_b) <= step:
        ordering = Ordering.TIE
    elif t_a < t_b:
        ordering = Ordering.A_FASTER
    else:
        ordering = Ordering.B_FASTER
    return MpembaVerdict(
        initial_equal=initial_equal, relax_time_a=t_a, relax_time_b=t_b,
        ordering=ordering, epsilon=epsilon,
        crossing_times=_crossing_times(traj_a, traj_b),
    )


def detect_role_reversal(gen_1: LindbladGenerator, gen_2: LindbladGenerator,
                         state_pair: tuple[np.ndarray, np.ndarray],
                         measure: MeasureKind, grids, epsilon: float,
                         tol_init: float = 1e-9,
                         bipartition: tuple[int, int] | None = None,
                         spectra: tuple[LiouvilleSpectrum, LiouvilleSpectrum] | None = None,
                         ) -> RoleReversalVerdict:
    """Mpemba verdicts for one state pair under two generators; reversed
    when the two orderings are opposite and neither is a tie."""
    rho_a, rho_b = state_pair
    grid_1, grid_2 = grids
    if spectra is None:
        spectra = (spectral_decompose(build_liouvillian(gen_1)),
                   spectral_decompose(build_liouvillian(gen_2)))
    verdicts = []
    for gen, spectrum, grid in zip((gen_1, gen_2), spectra, (grid_1, grid_2)):
        traj_a = sample_trajectory(spectrum, gen, rho_a, measure, grid, bipartition)
        traj_b = sample_trajectory(spectrum, gen, rho_b, measure, grid, bipartition)
        verdicts.append(detect_mpemba(traj_a, traj_b, epsilon, tol_init))
    opposite = {
        (Ordering.A_FASTER, Ordering.B_FASTER),
        (Ordering.B_FASTER, Ordering.A_FASTER),
    }
    flipped = (verdicts[0].ordering, verdicts[1].ordering) in opposite
    return RoleReversalVerdict(verdict_1=verdicts[0], verdict_2=verdicts[1],
                               reversed=flipped)
