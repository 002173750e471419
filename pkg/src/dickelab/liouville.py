"""Vectorized Liouvillian construction, spectral decomposition and evolution.

The master equation

    drho/dt = -i [H, rho] + sum_mu (L_mu rho L_mu^dag - {L_mu^dag L_mu, rho}/2)

is represented on column-stacked vectors as the d^2 x d^2 matrix

    Lv = -i (I kron H - H^T kron I)
         + sum_mu (conj(L_mu) kron L_mu
                   - (I kron L_mu^dag L_mu + (L_mu^dag L_mu)^T kron I)/2).

Eigenvalues are sorted by descending real part (ties by descending
imaginary part); index 0 is the zero mode whose right eigenmatrix,
normalized to unit trace, is the steady state.  Left eigenmatrices are
taken from the inverse of the right-eigenvector matrix, which makes the
bi-orthogonality relation Tr(l_j^dag r_k) = delta_jk exact to round-off.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, NumericFailure
from .linops import dagger, devectorize, is_hermitian, kron, validate_density_matrix

SPECTRUM_FORMAT = "dickelab-spectrum"
SPECTRUM_VERSION = 1

# exp(x) with x < EXP_FLOOR is flushed to zero instead of being evaluated
EXP_FLOOR = -700.0


@dataclass(frozen=True)
class LindbladGenerator:
    """Hamiltonian plus jump operators of one GKSL master equation."""

    hamiltonian: np.ndarray
    jumps: tuple[np.ndarray, ...]

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {h.shape}")
        if not is_hermitian(h, atol=1e-10):
            raise ValueError("Hamiltonian is not Hermitian within 1e-10")
        jumps = tuple(np.asarray(j, dtype=complex) for j in self.jumps)
        for j in jumps:
            if j.shape != h.shape:
                raise ValueError(
                    f"jump operator shape {j.shape} does not match Hamiltonian {h.shape}")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", jumps)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def apply_liouvillian(gen: LindbladGenerator, rho: np.ndarray) -> np.ndarray:
    """Direct (non-vectorized) action of the master equation on a matrix."""
    h = gen.hamiltonian
    out = -1.0j * (h @ rho - rho @ h)
    for jump in gen.jumps:
        jdj = dagger(jump) @ jump
        out += jump @ rho @ dagger(jump) - 0.5 * (jdj @ rho + rho @ jdj)
    return out


def build_liouvillian(gen: LindbladGenerator) -> np.ndarray:
    """d^2 x d^2 matrix representation on column-stacked vectors."""
    d = gen.dim
    eye = np.eye(d, dtype=complex)
    h = gen.hamiltonian
    lv = -1.0j * (kron(eye, h) - kron(h.T, eye))
    for jump in gen.jumps:
        jdj = dagger(jump) @ jump
        lv += kron(jump.conj(), jump) \
            - 0.5 * (kron(eye, jdj) + kron(jdj.T, eye))
    return lv


@dataclass(frozen=True)
class LiouvilleSpectrum:
    """Sorted eigenvalues with bi-orthogonal right/left eigenmatrices.

    right[i] and left[i] are d x d matrices; normalizers[i] = Tr(l_i^dag r_i).
    gap is -Re(lambda_2) after sorting.  degenerate is set when two
    eigenvalues are closer than 1e-9, in which case spectral evolution
    is refused.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    normalizers: np.ndarray
    gap: float
    degenerate: bool
    dim: int

    def __post_init__(self):
        n = self.dim * self.dim
        if self.eigenvalues.shape != (n,):
            raise ValueError("eigenvalue count does not match dim^2")
        if self.right.shape != (n, self.dim, self.dim) or self.left.shape != self.right.shape:
            raise ValueError("eigenmatrix arrays must have shape (d^2, d, d)")
        re = self.eigenvalues.real
        if np.any(np.diff(re) > 1e-12):
            raise ValueError("eigenvalues are not sorted by descending real part")
        if re[0] > 1e-9 or abs(self.eigenvalues[0].imag) > 1e-9:
            raise NumericFailure(
                f"leading eigenvalue {self.eigenvalues[0]} is not the zero mode")
        if np.any(re > 1e-9):
            raise NumericFailure("spectrum has an eigenvalue with positive real part")
        if not self.degenerate and np.any(np.abs(self.normalizers) < 1e-12):
            raise NumericFailure("vanishing normalizer in a non-degenerate spectrum")


def _min_pairwise_distance(vals: np.ndarray) -> float:
    dist = np.abs(vals[:, None] - vals[None, :])
    dist[np.diag_indices_from(dist)] = np.inf
    return float(dist.min())


def spectral_decompose(lv: np.ndarray, *, degeneracy_atol: float = 1e-9) -> LiouvilleSpectrum:
    """Eigendecompose a vectorized Liouvillian.

    Left eigenmatrices come from the inverse of the right-eigenvector
    matrix so that Tr(l_j^dag r_k) = delta_jk by construction; the zero
    mode is rescaled to unit trace, making l_1 = I and c_1 = Tr(rho_0).
    """
    lv = np.asarray(lv, dtype=complex)
    if lv.ndim != 2 or lv.shape[0] != lv.shape[1]:
        raise ValueError(f"Liouvillian must be square, got shape {lv.shape}")
    d = math.isqrt(lv.shape[0])
    if d * d != lv.shape[0]:
        raise ValueError(f"Liouvillian dimension {lv.shape[0]} is not a perfect square")

    try:
        vals, vecs = np.linalg.eig(lv)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"eigendecomposition failed: {exc}") from exc

    order = np.lexsort((-vals.imag, -vals.real))
    vals = vals[order]
    vecs = vecs[:, order]

    degenerate = _min_pairwise_distance(vals) < degeneracy_atol

    # unit-trace normalization of the steady mode
    tr1 = np.trace(devectorize(vecs[:, 0], d))
    if abs(tr1) > 1e-12:
        vecs = vecs.copy()
        vecs[:, 0] /= tr1

    try:
        winv = np.linalg.inv(vecs)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(
            f"right-eigenvector matrix is singular (defective Liouvillian?): {exc}"
        ) from exc

    n = d * d
    right = vecs.T.reshape(n, d, d).transpose(0, 2, 1)
    left = winv.conj().reshape(n, d, d).transpose(0, 2, 1)
    normalizers = np.einsum("ijk,ijk->i", left.conj(), right)
    gap = float(-vals[1].real)
    return LiouvilleSpectrum(
        eigenvalues=vals, right=right, left=left, normalizers=normalizers,
        gap=gap, degenerate=degenerate, dim=d,
    )


def steady_state(spectrum: LiouvilleSpectrum) -> np.ndarray:
    """Unit-trace zero mode, Hermitized and validated as a density matrix.

    Refused when the zero eigenvalue itself is (near-)degenerate, i.e. the
    spectral gap closes; degeneracy among decaying modes does not spoil
    uniqueness of the steady state.
    """
    if spectrum.gap < 1e-9:
        raise DegenerateSpectrumError(
            "steady state is not unique: the spectral gap closes")
    r1 = spectrum.right[0]
    tr = np.trace(r1)
    if abs(tr) < 1e-12:
        raise NumericFailure("zero-mode eigenmatrix has vanishing trace")
    rho = r1 / tr
    rho = 0.5 * (rho + dagger(rho))
    rho = rho / np.trace(rho).real
    try:
        validate_density_matrix(rho, herm_atol=1e-10, trace_atol=1e-10, eig_atol=1e-8)
    except ValueError as exc:
        raise NumericFailure(f"steady state failed validation: {exc}") from exc
    return rho


def overlap_coeffs(spectrum: LiouvilleSpectrum, rho0: np.ndarray) -> np.ndarray:
    """Coefficients c_i = Tr(l_i^dag rho_0) of an initial state.

    Evaluated as c_i = k_i a_i where a solves sum_i a_i r_i = rho_0, with
    one step of iterative refinement; this equals the trace pairing in
    exact arithmetic but avoids the conditioning loss of multiplying by
    an explicitly inverted eigenvector matrix.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (spectrum.dim, spectrum.dim):
        raise ValueError(
            f"state shape {rho0.shape} does not match spectrum dim {spectrum.dim}")
    if abs(np.trace(rho0) - 1.0) > 1e-10:
        raise ValueError("initial state must have unit trace")
    vmat = np.stack([r.reshape(-1, order="F") for r in spectrum.right], axis=1)
    target = rho0.reshape(-1, order="F")
    try:
        expansion = np.linalg.solve(vmat, target)
        expansion += np.linalg.solve(vmat, target - vmat @ expansion)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"mode expansion failed: {exc}") from exc
    coeffs = expansion * spectrum.normalizers
    if abs(coeffs[0] - 1.0) > 1e-10:
        raise NumericFailure(
            f"overlap with the identity mode is {coeffs[0]}, expected 1")
    return coeffs


def _mode_weights(eigenvalues: np.ndarray, times: np.ndarray) -> np.ndarray:
    """exp(lambda_i t) on a grid, flushed to zero below the underflow floor."""
    expo = np.multiply.outer(times, eigenvalues)
    weights = np.where(expo.real < EXP_FLOOR, 0.0, np.exp(expo))
    return weights


def evolve_grid(spectrum: LiouvilleSpectrum, coeffs: np.ndarray,
                times: np.ndarray, *, validate: bool = True) -> np.ndarray:
    """States rho(t) = rho_ss + sum_{i>=2} exp(lambda_i t) (c_i/k_i) r_i.

    Returns an array of shape (len(times), d, d).  Each state is
    symmetrized and trace-renormalized; the correction is required to
    stay below 1e-8 and the result to be positive within 1e-8.
    """
    if spectrum.degenerate:
        raise DegenerateSpectrumError(
            "spectral evolution assumes a non-degenerate spectrum")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    rho_ss = steady_state(spectrum)
    modes = (coeffs[1:] / spectrum.normalizers[1:])[:, None, None] * spectrum.right[1:]
    weights = _mode_weights(spectrum.eigenvalues[1:], times)
    states = rho_ss[None, :, :] + np.tensordot(weights, modes, axes=(1, 0))

    herm = 0.5 * (states + np.conjugate(np.transpose(states, (0, 2, 1))))
    correction = np.max(np.abs(herm - states)) if states.size else 0.0
    traces = np.einsum("ijj->i", herm).real
    trace_dev = np.max(np.abs(traces - 1.0)) if states.size else 0.0
    if validate:
        if correction > 1e-8:
            raise NumericFailure(
                f"Hermitization correction {correction:.3e} exceeds 1e-8")
        if trace_dev > 1e-8:
            raise NumericFailure(f"trace deviation {trace_dev:.3e} exceeds 1e-8")
    herm /= traces[:, None, None]
    if validate:
        min_eig = float(np.min(np.linalg.eigvalsh(herm)))
        if min_eig < -1e-8:
            raise NumericFailure(
                f"evolved state has negative eigenvalue {min_eig:.3e}")
    return herm


def evolve(spectrum: LiouvilleSpectrum, coeffs: np.ndarray, t: float) -> np.ndarray:
    """Single evolved state at time t (dimensionless t * Omega)."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return evolve_grid(spectrum, coeffs, np.array([t]))[0]


def evolve_ode_sampled(gen: LindbladGenerator, rho0: np.ndarray,
                       times: np.ndarray, dt: float) -> np.ndarray:
    """Fixed-step fourth-order Runge-Kutta integration sampled on a grid.

    Independent of the vectorized/spectral machinery; used as a
    cross-check oracle.  Raises NumericFailure when the trace drifts by
    more than 1e-6, which indicates the step size is too large.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise ValueError("times must be a nonempty strictly increasing grid")
    h = gen.hamiltonian
    jdjs = [dagger(j) @ j for j in gen.jumps]

    def rhs(rho):
        out = -1.0j * (h @ rho - rho @ h)
        for jump, jdj in zip(gen.jumps, jdjs):
            out += jump @ rho @ dagger(jump) - 0.5 * (jdj @ rho + rho @ jdj)
        return out

    rho = np.asarray(rho0, dtype=complex).copy()
    out = np.empty((times.size, gen.dim, gen.dim), dtype=complex)
    t_prev = 0.0
    for idx, t_target in enumerate(times):
        span = t_target - t_prev
        if span > 0:
            n_sub = max(1, math.ceil(span / dt))
            step = span / n_sub
            for _ in range(n_sub):
                k1 = rhs(rho)
                k2 = rhs(rho + 0.5 * step * k1)
                k3 = rhs(rho + 0.5 * step * k2)
                k4 = rhs(rho + step * k3)
                rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = abs(np.trace(rho) - 1.0)
        if not drift <= 1e-6:
            raise NumericFailure(
                f"trace drifted by {drift:.3e} at t={t_target}; decrease dt")
        out[idx] = rho
        t_prev = t_target
    return out


def evolve_ode(gen: LindbladGenerator, rho0: np.ndarray, t_end: float,
               dt: float) -> np.ndarray:
    """RK4-integrated state at t_end."""
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    if t_end == 0:
        return np.asarray(rho0, dtype=complex).copy()
    return evolve_ode_sampled(gen, rho0, np.array([t_end]), dt)[0]


def _split_complex(a: np.ndarray) -> dict:
    flat = np.asarray(a).reshape(-1)
    return {"re": flat.real.tolist(), "im": flat.imag.tolist()}


def _join_complex(d: dict, shape: tuple) -> np.ndarray:
    return (np.array(d["re"]) + 1.0j * np.array(d["im"])).reshape(shape)


def spectrum_to_dict(spectrum: LiouvilleSpectrum) -> dict:
    return {
        "format": SPECTRUM_FORMAT,
        "version": SPECTRUM_VERSION,
        "dim": spectrum.dim,
        "gap": spectrum.gap,
        "degenerate": spectrum.degenerate,
        "eigenvalues": _split_complex(spectrum.eigenvalues),
        "right": _split_complex(spectrum.right),
        "left": _split_complex(spectrum.left),
        "normalizers": _split_complex(spectrum.normalizers),
    }


def spectrum_from_dict(data: dict) -> LiouvilleSpectrum:
    if data.get("format") != SPECTRUM_FORMAT:
        raise ValueError(f"unrecognized spectrum format {data.get('format')!r}")
    if data.get("version") != SPECTRUM_VERSION:
        raise ValueError(f"unsupported spectrum version {data.get('version')!r}")
    d = int(data["dim"])
    n = d * d
    return LiouvilleSpectrum(
        eigenvalues=_join_complex(data["eigenvalues"], (n,)),
        right=_join_complex(data["right"], (n, d, d)),
        left=_join_complex(data["left"], (n, d, d)),
        normalizers=_join_complex(data["normalizers"], (n,)),
        gap=float(data["gap"]),
        degenerate=bool(data["degenerate"]),
        dim=d,
    )


def save_spectrum(spectrum: LiouvilleSpectrum, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spectrum_to_dict(spectrum), fh)


def load_spectrum(path) -> LiouvilleSpectrum:
    with open(path, encoding="utf-8") as fh:
        return spectrum_from_dict(json.load(fh))
