"""Relaxation quantifiers: l1 coherence, (log-)negativity, trace distance.

Coherence is always taken in the S_z eigenbasis, the basis every state
in this package is expressed in.  Differential forms subtract the
steady value (for trace distance, the distance to the steady state is
already differential).
"""

from __future__ import annotations

import enum

import numpy as np

from .linops import partial_transpose, trace_norm

# partial-transpose eigenvalues above this floor count as nonnegative
PPT_EIG_ATOL = 1e-12


class MeasureKind(enum.Enum):
    L1_COHERENCE = "l1-coherence"
    LOG_NEGATIVITY = "log-negativity"
    TRACE_DISTANCE_TO_STEADY = "trace-distance-to-steady"


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of moduli of the off-diagonal entries."""
    rho = np.asarray(rho)
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diagonal(rho))))


def negativity(rho: np.ndarray, dim_a: int, dim_b: int, *,
               subsystem: str = "A", eig_atol: float = PPT_EIG_ATOL) -> float:
    """Absolute sum of the negative partial-transpose eigenvalues."""
    pt = partial_transpose(rho, dim_a, dim_b, subsystem)
    eigs = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    return float(-np.sum(eigs[eigs < -eig_atol]))


def log_negativity(rho: np.ndarray, dim_a: int, dim_b: int, *,
                   subsystem: str = "A") -> float:
    """log2(2 N + 1) with N the negativity; zero for PPT states."""
    return float(np.log2(2.0 * negativity(rho, dim_a, dim_b, subsystem=subsystem) + 1.0))


def trace_distance(rho_1: np.ndarray, rho_2: np.ndarray) -> float:
    """Half the trace norm of the difference."""
    rho_1 = np.asarray(rho_1, dtype=complex)
    rho_2 = np.asarray(rho_2, dtype=complex)
    if rho_1.shape != rho_2.shape:
        raise ValueError(f"shape mismatch: {rho_1.shape} vs {rho_2.shape}")
    return 0.5 * trace_norm(rho_1 - rho_2)


def differential_measure(kind: MeasureKind, rho_t: np.ndarray, rho_ss: np.ndarray,
                         bipartition: tuple[int, int] | None = None) -> float:
    """Value of a quantifier relative to its steady value."""
    if kind is MeasureKind.L1_COHERENCE:
        return l1_coherence(rho_t) - l1_coherence(rho_ss)
    if kind is MeasureKind.LOG_NEGATIVITY:
        if bipartition is None:
            raise ValueError("log-negativity needs a (dim_a, dim_b) bipartition")
        dim_a, dim_b = bipartition
        return log_negativity(rho_t, dim_a, dim_b) - log_negativity(rho_ss, dim_a, dim_b)
    if kind is MeasureKind.TRACE_DISTANCE_TO_STEADY:
        return trace_distance(rho_t, rho_ss)
    raise ValueError(f"unknown measure kind {kind!r}")
