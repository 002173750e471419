"""Adiabatically eliminated dissipative Dicke model.

After eliminating the fast-decaying bosonic mode, a system of N spins
with splitting Omega, boson frequency omega, coupling g and decay rate
kappa is described by the spin-only Hamiltonian

    H = Omega S_z - (4 omega g^2 / (4 omega^2 + kappa^2)) S_x^2 / N

and a single jump operator proportional to S_x.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linops import spin_x, spin_z, kron
from .liouville import LindbladGenerator


class AdiabaticRegimeWarning(UserWarning):
    """The boson decay rate is not fast compared to the spin frequencies."""


@dataclass(frozen=True)
class DickeParams:
    """Physical parameters of one dissipative Dicke system."""

    Omega: float
    omega: float
    g: float
    kappa: float
    N: int

    def __post_init__(self):
        if self.Omega <= 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")
        if self.omega < 0:
            raise ValueError(f"omega must be nonnegative, got {self.omega}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if self.adiabatic_advisory:
            warnings.warn(
                f"kappa={self.kappa} is not large compared to max(Omega, omega)="
                f"{max(self.Omega, self.omega)}; the eliminated-boson model may "
                "be inaccurate for these parameters",
                AdiabaticRegimeWarning,
                stacklevel=3,
            )

    @property
    def adiabatic_advisory(self) -> bool:
        """True when kappa < 2 max(Omega, omega)."""
        return self.kappa < 2.0 * max(self.Omega, self.omega)

    @property
    def dim(self) -> int:
        return self.N + 1


@dataclass(frozen=True)
class BipartiteDickeParams:
    params_a: DickeParams
    params_b: DickeParams

    @property
    def dim(self) -> int:
        return self.params_a.dim * self.params_b.dim


def adiabatic_a_coefficient(params: DickeParams) -> complex:
    """Scalar c such that the eliminated boson operator is a = c S_x."""
    denom = math.sqrt(params.N) * (4.0 * params.omega**2 + params.kappa**2)
    return -params.g * (4.0 * params.omega + 2.0j * params.kappa) / denom


def effective_hamiltonian(params: DickeParams) -> np.ndarray:
    """Spin-only Hamiltonian of the eliminated model, dimension N + 1."""
    sx = spin_x(params.N)
    coeff = 4.0 * params.omega * params.g**2 / (4.0 * params.omega**2 + params.kappa**2)
    return params.Omega * spin_z(params.N) - coeff * (sx @ sx) / params.N


def effective_jump(params: DickeParams) -> np.ndarray:
    """Jump operator of the eliminated model, a complex multiple of S_x."""
    return math.sqrt(params.kappa) * adiabatic_a_coefficient(params) * spin_x(params.N)


def bipartite_model(bp: BipartiteDickeParams) -> tuple[np.ndarray, list[np.ndarray]]:
    """Composite Hamiltonian H_A x I + I x H_B and the two local jumps."""
    dim_a = bp.params_a.dim
    dim_b = bp.params_b.dim
    id_a = np.eye(dim_a, dtype=complex)
    id_b = np.eye(dim_b, dtype=complex)
    h_ab = kron(effective_hamiltonian(bp.params_a), id_b) \
        + kron(id_a, effective_hamiltonian(bp.params_b))
    jumps = [kron(effective_jump(bp.params_a), id_b),
             kron(id_a, effective_jump(bp.params_b))]
    return h_ab, jumps


def lindblad_generator(params: DickeParams) -> LindbladGenerator:
    return LindbladGenerator(effective_hamiltonian(params), (effective_jump(params),))


def bipartite_generator(bp: BipartiteDickeParams) -> LindbladGenerator:
    h_ab, jumps = bipartite_model(bp)
    return LindbladGenerator(h_ab, tuple(jumps))
