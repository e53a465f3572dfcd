"""
Damping-matrix positivity: the coherence constraints that accompany thermo-majorization.

Covariant channels act as Lambda(|i><i|) = sum_j p(i->j)|j><j| and
Lambda(|i><j|) = alpha_ij |i><j|. Complete positivity of such a map is the
positivity of the damping matrix with p(i->i) on the diagonal and alpha_ij
off it.
"""
from dataclasses import dataclass
from typing import Optional

import cvxpy as cp
import numpy as np

from src.config import config
from src.exceptions import (
    DegenerateBohrSpectrumError, DimensionMismatchError, DomainError,
    InfeasibleTransitionError, NotGibbsStochasticError, RegimeViolationError,
    SingularInputError, ThermoAnalysisError, ValidationError
)
from src.thermo.core import (
    BetaLike, DensityMatrix, Hamiltonian, as_beta, bohr_spectrum, gibbs_vector
)
from src.thermo.thermo_majorization import diagonal_feasible, qubit_diagonal_feasible
from src.utils.logger import logger


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic matrix of p(i->j), row i = source level."""
    G: np.ndarray  # pylint: disable=invalid-name

    def __post_init__(self):
        G = np.array(self.G, dtype=float)  # pylint: disable=invalid-name
        tol = config.tolerances.trace
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValidationError(f"transition matrix must be square, got {G.shape}", field="G")
        if np.any(G < -tol) or np.any(G > 1 + tol):
            raise ValidationError("transition probabilities must lie in [0, 1]", field="G")
        row_residual = float(np.max(np.abs(G.sum(axis=1) - 1.0)))
        if row_residual > tol:
            raise NotGibbsStochasticError(row_residual, "rows do not sum to 1")
        G = np.clip(G, 0.0, 1.0)
        G.setflags(write=False)
        object.__setattr__(self, "G", G)

    @property
    def dimension(self) -> int:
        """Number of levels."""
        return self.G.shape[0]

    def stay(self) -> np.ndarray:
        """Diagonal p(i->i)."""
        return np.diag(self.G).copy()

    def apply(self, populations) -> np.ndarray:
        """Maps a population vector p to p G."""
        return np.asarray(populations, dtype=float) @ self.G


@dataclass(frozen=True, eq=False)
class DampingFactors:
    """Complex alpha_ij with alpha_ji = conj(alpha_ij); the diagonal is unused and held at 1."""
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=complex)
        if alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise ValidationError(f"damping factors must be square, got {alpha.shape}",
                                  field="alpha")
        np.fill_diagonal(alpha, 1.0)
        if np.max(np.abs(alpha - alpha.conj().T)) > config.tolerances.herm:
            raise ValidationError("damping factors must satisfy alpha_ji = conj(alpha_ij)",
                                  field="alpha")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def uniform(cls, d: int, value: complex) -> "DampingFactors":
        """All off-diagonal factors equal to a real ``value``."""
        alpha = np.full((d, d), value, dtype=complex)
        return cls(0.5 * (alpha + alpha.conj().T))

    @classmethod
    def qubit(cls, alpha01: complex) -> "DampingFactors":
        """Qubit factors from alpha_01."""
        return cls(np.array([[1.0, alpha01], [np.conj(alpha01), 1.0]], dtype=complex))

    @property
    def dimension(self) -> int:
        """Number of levels."""
        return self.alpha.shape[0]


@dataclass(frozen=True, eq=False)
class DampingMatrix:
    """Hermitian matrix with stay probabilities on the diagonal and alpha_ij off it."""
    M: np.ndarray  # pylint: disable=invalid-name


@dataclass(frozen=True, eq=False)
class DMPVerdict:
    """Outcome of the positivity test with the witness on failure."""
    satisfied: bool
    min_eigenvalue: float
    witness: Optional[np.ndarray] = None


def is_gibbs_stochastic(G, gibbs: np.ndarray, tol: Optional[float] = None) -> float:
    """
    Worst residual of the row-sum and Gibbs-column conditions.

    Raises NotGibbsStochasticError when it exceeds ``tol``.
    """
    tol = config.tolerances.trace if tol is None else tol
    matrix = G.G if isinstance(G, TransitionMatrix) else np.asarray(G, dtype=float)
    row_residual = float(np.max(np.abs(matrix.sum(axis=1) - 1.0)))
    gibbs_residual = float(np.max(np.abs(np.asarray(gibbs) @ matrix - gibbs)))
    if row_residual > tol:
        raise NotGibbsStochasticError(row_residual, "rows do not sum to 1")
    if gibbs_residual > tol:
        raise NotGibbsStochasticError(gibbs_residual)
    return max(row_residual, gibbs_residual)


def damping_matrix(G: TransitionMatrix, A: DampingFactors) -> DampingMatrix:
    """Assembles M_ii = p(i->i), M_ij = alpha_ij."""
    if G.dimension != A.dimension:
        raise DimensionMismatchError(G.dimension, A.dimension, "damping factors")
    matrix = A.alpha.copy()
    np.fill_diagonal(matrix, G.stay())
    return DampingMatrix(matrix)


def dmp_check(M, tol: Optional[float] = None) -> DMPVerdict:
    """Positivity via the smallest eigenvalue; returns the eigenvector as witness on failure."""
    tol = config.tolerances.psd if tol is None else tol
    matrix = M.M if isinstance(M, DampingMatrix) else np.asarray(M, dtype=complex)
    if np.max(np.abs(matrix - matrix.conj().T)) > config.tolerances.herm:
        raise ValidationError("damping matrix must be Hermitian", field="M")
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (matrix + matrix.conj().T))
    smallest = float(eigenvalues[0])
    if smallest >= -tol:
        return DMPVerdict(satisfied=True, min_eigenvalue=smallest)
    return DMPVerdict(satisfied=False, min_eigenvalue=smallest, witness=eigenvectors[:, 0])


def minor_bound(G: TransitionMatrix) -> np.ndarray:
    """b_ij = sqrt(p(i->i) p(j->j)), the 2x2-minor limit on |alpha_ij|."""
    stay = G.stay()
    return np.sqrt(np.outer(stay, stay))


def _qubit_terms(p: float, q: float, beta: BetaLike, dE: float):
    """Checks feasibility and singularity; returns e^{beta dE} and p - (1-p) e^{beta dE}."""
    H = Hamiltonian((0.0, dE))
    verdict = qubit_diagonal_feasible(p, q, H, beta)
    if not verdict.feasible:
        raise InfeasibleTransitionError(
            f"populations {p} -> {q} violate thermo-majorization (case {verdict.case})")
    boltzmann = float(np.exp(as_beta(beta).beta * dE))
    denominator = p - (1.0 - p) * boltzmann
    if abs(denominator) < config.tolerances.sing:
        raise SingularInputError(p, boltzmann / (1.0 + boltzmann))
    return boltzmann, denominator


def qubit_kappa(p: float, q: float, beta: BetaLike, dE: float) -> float:
    """
    Optimal damping factor for ground populations p -> q.

    kappa = sqrt((q - (1-p)e)(p - (1-q)e)) / |p - (1-p)e| with e = e^{beta dE}.
    """
    boltzmann, denominator = _qubit_terms(p, q, beta, dE)
    numerator = (q - (1.0 - p) * boltzmann) * (p - (1.0 - q) * boltzmann)
    return float(min(1.0, np.sqrt(max(numerator, 0.0)) / abs(denominator)))


def qubit_transition_probs(p: float, q: float, beta: BetaLike, dE: float) -> TransitionMatrix:
    """The unique Gibbs-stochastic qubit G that maps ground population p to q."""
    boltzmann, denominator = _qubit_terms(p, q, beta, dE)
    stay_ground = (q - (1.0 - p) * boltzmann) / denominator
    stay_excited = ((1.0 - q) - p / boltzmann) / ((1.0 - p) - p / boltzmann)
    tol = config.tolerances.curve
    for value in (stay_ground, stay_excited):
        if value < -tol or value > 1 + tol:
            raise InfeasibleTransitionError(
                f"transition probability {value} outside [0, 1] for {p} -> {q}")
    stay_ground = float(np.clip(stay_ground, 0.0, 1.0))
    stay_excited = float(np.clip(stay_excited, 0.0, 1.0))
    return TransitionMatrix(np.array([[stay_ground, 1.0 - stay_ground],
                                      [1.0 - stay_excited, stay_excited]]))


@dataclass(frozen=True)
class QubitVerdict:
    """Full qubit verdict: populations and coherence."""
    feasible: bool
    case: str
    diagonal_feasible: bool
    kappa: Optional[float]
    gibbs_diagonal: bool
    alpha_abs: float
    chi_abs: float


def qubit_full_feasible(rho: DensityMatrix, sigma: DensityMatrix, H: Hamiltonian,
                        beta: BetaLike, tol: Optional[float] = None) -> QubitVerdict:
    """Feasible iff thermo-majorization holds and |chi| <= |alpha| kappa (phases ignored)."""
    tol = config.tolerances.coh if tol is None else tol
    if H.dimension != 2 or rho.dimension != 2 or sigma.dimension != 2:
        raise DimensionMismatchError(2, max(H.dimension, rho.dimension, sigma.dimension),
                                     "qubit transition")
    if not bohr_spectrum(H).nondegenerate:
        raise DegenerateBohrSpectrumError(H.levels)

    p, q = float(rho.populations[0]), float(sigma.populations[0])
    alpha_abs, chi_abs = abs(rho.coherence(0, 1)), abs(sigma.coherence(0, 1))
    diag = qubit_diagonal_feasible(p, q, H, beta)
    if not diag.feasible:
        return QubitVerdict(False, diag.case, False, None, False, alpha_abs, chi_abs)

    gibbs_diag = False
    try:
        kappa = qubit_kappa(p, q, beta, H.levels[1])
    except SingularInputError:
        # Gibbs-diagonal input: the identity keeps every coherence
        kappa, gibbs_diag = 1.0, True
    feasible = chi_abs <= alpha_abs * kappa + tol
    return QubitVerdict(feasible, diag.case, True, kappa, gibbs_diag, alpha_abs, chi_abs)


def t2_kappa(p0: float, t: float, T2: float) -> float:  # pylint: disable=invalid-name
    """
    Optimal qubit damping after time t with populations relaxing at rate 1/T2.

    kappa^2 = x + p0(1-p0)(1-x)^2 with x = e^{-t/T2}, which expands to
    p0 - p0^2 + (1 - 2p0 + 2p0^2)x + (p0 - p0^2)x^2.
    """
    if not 0.0 <= p0 <= 1.0:
        raise DomainError(f"p0={p0} outside [0, 1]")
    if t < 0 or T2 <= 0:
        raise DomainError(f"need t >= 0 and T2 > 0, got t={t}, T2={T2}")
    decay = float(np.exp(-t / T2))
    return float(np.sqrt(decay + p0 * (1.0 - p0) * (1.0 - decay) ** 2))


def davies_qubit_map(p0: float, t: float, T1: float, T2: float,  # pylint: disable=invalid-name
                     variant: str = "lindblad", energy_gap: float = 1.0):
    """
    Fixed-time relaxation channel on a qubit with Gibbs ground population p0.

    Populations relax with e^{-t/T2}. ``variant="lindblad"`` damps coherence by
    e^{-t/T1}; ``variant="optimal"`` uses sqrt(p(0->0) p(1->1)).
    """
    # eto_channels builds on this module
    from src.thermo.eto_channels import build_eto  # pylint: disable=import-outside-toplevel

    if not 0.5 <= p0 < 1.0:
        raise DomainError(f"Gibbs ground population p0={p0} must lie in [1/2, 1)")
    if t < 0 or T1 <= 0 or T2 <= 0:
        raise DomainError(f"need t >= 0 and positive times, got t={t}, T1={T1}, T2={T2}")
    if 2 * T1 < T2:
        raise RegimeViolationError(f"semigroup form needs 2 T1 >= T2, got T1={T1}, T2={T2}")

    p1 = 1.0 - p0
    relaxed = 1.0 - float(np.exp(-t / T2))
    G = np.array([[1.0 - p1 * relaxed, p1 * relaxed],  # pylint: disable=invalid-name
                  [p0 * relaxed, 1.0 - p0 * relaxed]])
    if variant == "lindblad":
        alpha = float(np.exp(-t / T1))
    elif variant == "optimal":
        alpha = t2_kappa(p0, t, T2)
    else:
        raise ValidationError(f"unknown variant '{variant}'", field="variant")

    H = Hamiltonian((0.0, energy_gap))
    beta = float(np.log(p0 / p1)) / energy_gap
    return build_eto(TransitionMatrix(G), DampingFactors.qubit(alpha), H, beta)


def kappa_profile(p: float, beta: BetaLike, dE: float, points: int = 101):
    """(q, kappa) samples over the feasible outputs of a fixed input p."""
    H = Hamiltonian((0.0, dE))
    rows = []
    for q in np.linspace(0.0, 1.0, points):
        if not qubit_diagonal_feasible(p, float(q), H, beta).feasible:
            continue
        try:
            rows.append((float(q), qubit_kappa(p, float(q), beta, dE)))
        except SingularInputError:
            rows.append((float(q), 1.0))
    return rows


@dataclass(frozen=True, eq=False)
class DMPFeasibility:
    """Semidefinite feasibility of a general-dimension transition."""
    feasible: Optional[bool]
    margin: Optional[float]
    status: str
    G: Optional[np.ndarray] = None  # pylint: disable=invalid-name
    free_pairs: tuple = ()


def _pinned_factors(rho: DensityMatrix, sigma: DensityMatrix):
    """
    alpha_ij = sigma_ij / rho_ij where rho carries coherence.

    Pairs with no coherence on either side are left free; a pair that gains
    coherence from nothing returns None.
    """
    tol = config.tolerances.coh
    pinned, free = {}, []
    for i in range(rho.dimension):
        for j in range(i + 1, rho.dimension):
            if abs(rho.matrix[i, j]) > tol:
                pinned[(i, j)] = complex(sigma.matrix[i, j] / rho.matrix[i, j])
            elif abs(sigma.matrix[i, j]) > tol:
                return None, None
            else:
                free.append((i, j))
    return pinned, tuple(free)


def _clean_stochastic(matrix: np.ndarray) -> np.ndarray:
    """Clips solver round-off and renormalizes rows."""
    cleaned = np.clip(np.asarray(matrix, dtype=float), 0.0, None)
    return cleaned / cleaned.sum(axis=1, keepdims=True)


def dmp_feasible(rho: DensityMatrix, sigma: DensityMatrix, H: Hamiltonian, beta: BetaLike,
                 tol: Optional[float] = None) -> DMPFeasibility:
    """
    Whether some Gibbs-stochastic G with p G = q has a positive damping matrix
    for the factors alpha_ij = sigma_ij / rho_ij.

    Factors of pairs without coherence in either state are free variables of
    the completion. Exact for enhanced thermal operations, necessary only for
    thermal operations.
    """
    tol = config.tolerances.sdp if tol is None else tol
    d = H.dimension
    if rho.dimension != d or sigma.dimension != d:
        raise DimensionMismatchError(d, max(rho.dimension, sigma.dimension), "state")
    if not bohr_spectrum(H).nondegenerate:
        raise DegenerateBohrSpectrumError(H.levels)

    if np.max(np.abs(rho.matrix - sigma.matrix)) <= config.tolerances.coh:
        return DMPFeasibility(feasible=True, margin=None, status="identity", G=np.eye(d))

    gibbs = gibbs_vector(H, beta)
    p, q = rho.populations, sigma.populations
    if not diagonal_feasible(p, q, H, beta):
        return DMPFeasibility(feasible=False, margin=None, status="diagonal_infeasible")

    pinned, free = _pinned_factors(rho, sigma)
    if pinned is None:
        return DMPFeasibility(feasible=False, margin=None, status="coherence_created")

    G = cp.Variable((d, d), nonneg=True)  # pylint: disable=invalid-name
    M = cp.Variable((d, d), hermitian=True)  # pylint: disable=invalid-name
    margin = cp.Variable()
    constraints = [
        cp.sum(G, axis=1) == 1,
        gibbs @ G == gibbs,
        p @ G == q,
        cp.real(cp.diag(M)) == cp.diag(G),
        M - margin * np.eye(d) >> 0,
        margin <= 1,
    ]
    constraints += [M[i, j] == value for (i, j), value in pinned.items()]
    problem = cp.Problem(cp.Maximize(margin), constraints)
    try:
        problem.solve()
    except cp.error.SolverError as exc:
        logger.error("Damping-matrix feasibility solve failed: %s", exc)
        raise ThermoAnalysisError(f"semidefinite solve failed: {exc}", exit_code=3) from exc

    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE) or margin.value is None:
        return DMPFeasibility(feasible=False, margin=None, status=problem.status,
                              free_pairs=free)
    value = float(margin.value)
    logger.debug("Damping-matrix margin %.3e (status %s, %d free pairs)", value,
                 problem.status, len(free))
    return DMPFeasibility(feasible=value >= -tol, margin=value, status=problem.status,
                          G=_clean_stochastic(G.value), free_pairs=free)
