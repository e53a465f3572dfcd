"""
Hamiltonians, density matrices and the thermal primitives shared by every analysis.

All types are frozen after construction; arrays handed out are read-only views.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import unitary_group

from src.config import ToleranceConfig, config
from src.exceptions import (
    DimensionMismatchError, DomainError, StateValidationError, ValidationError
)
from src.utils.logger import logger


def _tolerances(tolerances: Optional[ToleranceConfig]) -> ToleranceConfig:
    return tolerances if tolerances is not None else config.tolerances


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class InverseTemperature:
    """Inverse temperature beta >= 0; beta = 0 is infinite temperature."""
    beta: float

    def __post_init__(self):
        value = float(self.beta)
        if not np.isfinite(value) or value < 0:
            raise ValidationError(f"beta must be finite and non-negative, got {self.beta}",
                                  field="beta")
        object.__setattr__(self, "beta", value)

    @property
    def is_infinite_temperature(self) -> bool:
        """True when beta = 0."""
        return self.beta == 0.0


BetaLike = Union[InverseTemperature, float, int]


def as_beta(beta: BetaLike) -> InverseTemperature:
    """Accepts a bare float wherever an InverseTemperature is expected."""
    if isinstance(beta, InverseTemperature):
        return beta
    return InverseTemperature(float(beta))


@dataclass(frozen=True)
class Hamiltonian:
    """
    Diagonal system Hamiltonian.

    Levels must be given in ascending order; they are shifted so the ground
    level sits at zero and the removed shift is kept in ``offset``.
    """
    levels: tuple[float, ...]
    offset: float = 0.0

    def __post_init__(self):
        levels = tuple(float(e) for e in self.levels)
        if not levels:
            raise ValidationError("Hamiltonian needs at least one level", field="energies")
        if not all(np.isfinite(levels)):
            raise ValidationError("energies must be finite", field="energies")
        if any(levels[i] > levels[i + 1] for i in range(len(levels) - 1)):
            raise ValidationError("energies must be sorted ascending", field="energies")
        shift = levels[0]
        object.__setattr__(self, "levels", tuple(e - shift for e in levels))
        object.__setattr__(self, "offset", float(self.offset) + shift)

    @classmethod
    def from_energies(cls, energies: Sequence[float]) -> "Hamiltonian":
        """Builds a Hamiltonian from energies in any order."""
        energies = np.asarray(energies, dtype=float)
        order = np.argsort(energies, kind="stable")
        if np.any(order != np.arange(order.size)):
            logger.debug("Sorted energies with permutation %s", order.tolist())
        return cls(tuple(energies[order]))

    @property
    def dimension(self) -> int:
        """Number of levels d."""
        return len(self.levels)

    @property
    def energies(self) -> np.ndarray:
        """Shifted levels as an array."""
        return np.asarray(self.levels, dtype=float)

    def matrix(self) -> np.ndarray:
        """Diagonal matrix of the shifted levels."""
        return np.diag(self.energies)

    def gaps(self) -> np.ndarray:
        """Nearest-neighbour gaps E_{i+1} - E_i."""
        return np.diff(self.energies)

    def boltzmann_factors(self, beta: BetaLike) -> np.ndarray:
        """Unnormalized weights e^{-beta E_i}."""
        return np.exp(-as_beta(beta).beta * self.energies)


@dataclass(frozen=True)
class BohrSpectrum:
    """Pairwise level differences and whether the nonzero ones are all distinct."""
    frequencies: tuple[float, ...]
    nondegenerate: bool


def bohr_spectrum(energies: Union[Hamiltonian, Sequence[float]],
                  gap_tol: Optional[float] = None) -> BohrSpectrum:
    """
    Computes all differences E_i - E_j (i != j) and flags degeneracy.

    Two differences closer than ``gap_tol`` count as equal, so near-degenerate
    spectra are reported as degenerate.
    """
    if gap_tol is None:
        gap_tol = config.tolerances.bohr_gap
    levels = energies.energies if isinstance(energies, Hamiltonian) else np.asarray(
        energies, dtype=float)
    d = levels.size
    diffs = np.array([levels[i] - levels[j] for i in range(d) for j in range(d) if i != j])
    nonzero = np.sort(diffs[np.abs(diffs) > gap_tol]) if diffs.size else diffs
    # a zero difference means two equal levels, which is a degenerate spectrum too
    has_zero = diffs.size > nonzero.size
    nondegenerate = not has_zero and bool(np.all(np.diff(nonzero) > gap_tol))
    return BohrSpectrum(frequencies=tuple(float(x) for x in np.sort(diffs)),
                        nondegenerate=nondegenerate)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix in the energy eigenbasis. Build it with ``assert_state``."""
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _readonly(np.asarray(self.matrix, dtype=complex)))

    @property
    def dimension(self) -> int:
        """Hilbert space dimension."""
        return self.matrix.shape[0]

    @property
    def populations(self) -> np.ndarray:
        """Real diagonal, a probability vector."""
        return np.real(np.diag(self.matrix)).copy()

    def coherence(self, i: int, j: int) -> complex:
        """Off-diagonal element rho_ij."""
        return complex(self.matrix[i, j])


def assert_state(m, tolerances: Optional[ToleranceConfig] = None) -> DensityMatrix:
    """
    Validates a candidate density matrix.

    Checks hermiticity, unit trace and positivity in that order and raises
    StateValidationError naming the first violated invariant.
    """
    tol = _tolerances(tolerances)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f"state must be a non-empty square matrix, got shape {m.shape}",
                              field="rho")

    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > tol.herm:
        raise StateValidationError("hermiticity", herm_dev)

    trace_dev = abs(complex(np.trace(m)) - 1.0)
    if trace_dev > tol.trace:
        raise StateValidationError("trace", trace_dev)

    hermitian = 0.5 * (m + m.conj().T)
    min_eig = float(np.linalg.eigvalsh(hermitian)[0])
    if min_eig < -tol.psd:
        raise StateValidationError("positivity", -min_eig)

    return DensityMatrix(hermitian)


def gibbs_state(H: Hamiltonian, beta: BetaLike) -> DensityMatrix:
    """Thermal state e^{-beta H}/Z, renormalized after exponentiation."""
    return DensityMatrix(np.diag(gibbs_vector(H, beta)).astype(complex))


def gibbs_vector(H: Hamiltonian, beta: BetaLike) -> np.ndarray:
    """Gibbs populations as a probability vector."""
    weights = H.boltzmann_factors(beta)
    return weights / weights.sum()


def von_neumann_entropy(rho: Union[DensityMatrix, np.ndarray], base: str = "e") -> float:
    """Entropy from eigenvalues with 0 log 0 = 0; ``base`` is "e" or "2"."""
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    eigs = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    eigs = eigs[eigs > 0]
    entropy = float(-np.sum(eigs * np.log(eigs)))
    if base == "2":
        return entropy / np.log(2.0)
    if base != "e":
        raise ValidationError(f"unknown entropy base '{base}'", field="base")
    return entropy


def free_energy(rho: DensityMatrix, H: Hamiltonian, beta: BetaLike) -> float:
    """F = tr(H rho) - S(rho)/beta; undefined at infinite temperature."""
    beta = as_beta(beta)
    if beta.is_infinite_temperature:
        raise DomainError("free energy is undefined at beta = 0 (infinite temperature)")
    if rho.dimension != H.dimension:
        raise DimensionMismatchError(H.dimension, rho.dimension, "state")
    energy = float(np.dot(H.energies, rho.populations))
    return energy - von_neumann_entropy(rho) / beta.beta


def relative_entropy_to_gibbs(rho: DensityMatrix, H: Hamiltonian, beta: BetaLike) -> float:
    """D(rho || tau) = beta (F(rho) - F(tau)), the monotone behind the second law."""
    beta = as_beta(beta)
    tau = gibbs_state(H, beta)
    return beta.beta * (free_energy(rho, H, beta) - free_energy(tau, H, beta))


def rotate(rho: Union[DensityMatrix, np.ndarray], H: Hamiltonian, t: float) -> np.ndarray:
    """Free evolution e^{-iHt} rho e^{iHt} for a diagonal H."""
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    phases = np.exp(-1j * H.energies * t)
    return matrix * np.outer(phases, phases.conj())


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random d x d unitary drawn from ``rng``."""
    if d == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(d, random_state=rng)


def random_density_matrix(d: int, rng: np.random.Generator,
                          rank: Optional[int] = None) -> DensityMatrix:
    """Random state G G^dag / tr from a complex Ginibre matrix of the given rank."""
    rank = d if rank is None else rank
    ginibre = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    matrix = ginibre @ ginibre.conj().T
    return DensityMatrix(matrix / np.trace(matrix).real)


def state_from_populations(populations: Sequence[float],
                           coherences: Optional[dict] = None) -> DensityMatrix:
    """
    Assembles and validates a state from a population vector and
    optional {(i, j): value} coherences (the Hermitian partner is filled in).
    """
    populations = np.asarray(populations, dtype=float)
    matrix = np.diag(populations).astype(complex)
    for (i, j), value in (coherences or {}).items():
        matrix[i, j] = value
        matrix[j, i] = np.conj(value)
    return assert_state(matrix)
