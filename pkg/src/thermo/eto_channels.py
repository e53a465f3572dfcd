"""
Enhanced thermal operations: covariant, Gibbs-preserving CPTP maps stored as (G, alpha).

The Choi matrix is unnormalized (trace d) and indexed J[(i, a), (j, b)] =
Lambda(|i><j|)_{ab}, input index first.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np

from src.config import config
from src.exceptions import (
    DegenerateBohrSpectrumError, DimensionMismatchError, DMPViolationError, ValidationError
)
from src.thermo.coherence_bounds import (
    DampingFactors, DampingMatrix, TransitionMatrix, damping_matrix, is_gibbs_stochastic,
    minor_bound
)
from src.thermo.core import (
    BetaLike, DensityMatrix, Hamiltonian, InverseTemperature, as_beta, assert_state,
    bohr_spectrum, gibbs_state, gibbs_vector, random_density_matrix, rotate
)
from src.utils.logger import logger


@dataclass(frozen=True, eq=False)
class ETOChannel:
    """Covariant Gibbs-preserving channel; build with ``build_eto``."""
    G: TransitionMatrix  # pylint: disable=invalid-name
    A: DampingFactors  # pylint: disable=invalid-name
    H: Hamiltonian  # pylint: disable=invalid-name
    beta: InverseTemperature
    choi: np.ndarray

    @property
    def dimension(self) -> int:
        """System dimension d."""
        return self.H.dimension

    def damping_matrix(self) -> DampingMatrix:
        """The coherence block of the Choi matrix."""
        return damping_matrix(self.G, self.A)


def assemble_choi(G: TransitionMatrix, A: DampingFactors) -> np.ndarray:
    """Choi matrix of the covariant map with populations G and coherences A."""
    d = G.dimension
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for a in range(d):
            choi[i * d + a, i * d + a] = G.G[i, a]
        for j in range(d):
            if i != j:
                choi[i * d + i, j * d + j] = A.alpha[i, j]
    return choi


def choi_psd_check(choi: np.ndarray, tol: Optional[float] = None):
    """Smallest Choi eigenvalue and its eigenvector."""
    tol = config.tolerances.psd if tol is None else tol
    eigenvalues, eigenvectors = np.linalg.eigh(choi)
    return eigenvalues[0] >= -tol, float(eigenvalues[0]), eigenvectors[:, 0]


def is_trace_preserving(choi: np.ndarray, tol: float = 1e-10) -> bool:
    """Tr_out J = identity on the input."""
    d = int(round(np.sqrt(choi.shape[0])))
    reduced = np.einsum("iaja->ij", choi.reshape(d, d, d, d))
    return bool(np.allclose(reduced, np.eye(d), rtol=0.0, atol=tol))


def build_eto(G: TransitionMatrix, A: DampingFactors, H: Hamiltonian,
              beta: BetaLike) -> ETOChannel:
    """
    Validates and builds a channel from populations and damping factors.

    Fails with DMPViolationError exactly when the damping matrix is not
    positive, because the Choi matrix is that matrix plus the non-negative
    entries p(i->j), i != j.
    """
    beta = as_beta(beta)
    d = H.dimension
    if G.dimension != d:
        raise DimensionMismatchError(d, G.dimension, "transition matrix")
    if A.dimension != d:
        raise DimensionMismatchError(d, A.dimension, "damping factors")
    if d > 1 and not bohr_spectrum(H).nondegenerate:
        raise DegenerateBohrSpectrumError(H.levels)

    is_gibbs_stochastic(G, gibbs_vector(H, beta))
    choi = assemble_choi(G, A)
    positive, eigenvalue, witness = choi_psd_check(choi)
    if not positive:
        logger.warning("Rejected channel: Choi eigenvalue %.3e", eigenvalue)
        raise DMPViolationError(eigenvalue, witness)

    choi.setflags(write=False)
    return ETOChannel(G=G, A=A, H=H, beta=beta, choi=choi)


def _apply_matrix(ch: ETOChannel, matrix: np.ndarray) -> np.ndarray:
    out = ch.A.alpha * matrix
    np.fill_diagonal(out, np.real(np.diag(matrix)) @ ch.G.G)
    return out


def apply(ch: ETOChannel, rho: DensityMatrix) -> DensityMatrix:
    """sigma_jj = sum_i p(i->j) rho_ii and sigma_ij = alpha_ij rho_ij."""
    if rho.dimension != ch.dimension:
        raise DimensionMismatchError(ch.dimension, rho.dimension, "state")
    return assert_state(_apply_matrix(ch, rho.matrix))


def choi_map(choi: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Map X -> sum_ij X_ij Lambda(|i><j|) read off an arbitrary Choi matrix."""
    d = int(round(np.sqrt(choi.shape[0])))
    blocks = np.asarray(choi).reshape(d, d, d, d)

    def mapping(matrix: np.ndarray) -> np.ndarray:
        return np.einsum("ij,iajb->ab", np.asarray(matrix, dtype=complex), blocks)

    return mapping


@dataclass(frozen=True)
class CovarianceVerdict:
    """Largest deviation from time-translation covariance and where it occurred."""
    covariant: bool
    max_deviation: float
    witness_time: Optional[float] = None


def verify_covariance(ch: Union[ETOChannel, np.ndarray], samples: int = 100,
                      H: Optional[Hamiltonian] = None, seed: int = 0,
                      tol: float = 1e-9) -> CovarianceVerdict:
    """
    Samples random (rho, t) and compares Lambda(e^{-iHt} rho e^{iHt}) with
    e^{-iHt} Lambda(rho) e^{iHt} in max-entry norm.

    ``ch`` may be a built channel or a raw Choi matrix together with ``H``.
    """
    if isinstance(ch, ETOChannel):
        H = ch.H
        mapping = lambda matrix: _apply_matrix(ch, matrix)  # noqa: E731 pylint: disable=unnecessary-lambda-assignment
    else:
        if H is None:
            raise ValidationError("a Hamiltonian is required with a raw Choi matrix", field="H")
        mapping = choi_map(ch)

    rng = np.random.default_rng(seed)
    worst, worst_t = 0.0, None
    for _ in range(samples):
        rho = random_density_matrix(H.dimension, rng).matrix
        t = float(rng.uniform(0.0, 10.0))
        deviation = float(np.max(np.abs(mapping(rotate(rho, H, t)) - rotate(mapping(rho), H, t))))
        if deviation > worst:
            worst, worst_t = deviation, t
    return CovarianceVerdict(covariant=worst <= tol, max_deviation=worst,
                             witness_time=worst_t if worst > tol else None)


def compose(first: ETOChannel, second: ETOChannel) -> ETOChannel:
    """Channel that applies ``first`` and then ``second``."""
    if first.H.levels != second.H.levels or first.beta != second.beta:
        raise ValidationError("channels act on different systems or temperatures",
                              field="channel")
    G = TransitionMatrix(first.G.G @ second.G.G)  # pylint: disable=invalid-name
    A = DampingFactors(first.A.alpha * second.A.alpha)  # pylint: disable=invalid-name
    return build_eto(G, A, first.H, first.beta)


def kraus_decomposition(ch: ETOChannel, tol: float = 1e-12) -> List[np.ndarray]:
    """Kraus operators sqrt(lambda) unvec(v) from the Choi eigendecomposition."""
    d = ch.dimension
    eigenvalues, eigenvectors = np.linalg.eigh(ch.choi)
    scale = max(1.0, float(eigenvalues[-1]))
    return [np.sqrt(value) * vector.reshape(d, d).T
            for value, vector in zip(eigenvalues, eigenvectors.T) if value > tol * scale]


def identity_channel(H: Hamiltonian, beta: BetaLike) -> ETOChannel:
    """G = identity, alpha = 1."""
    d = H.dimension
    return build_eto(TransitionMatrix(np.eye(d)), DampingFactors.uniform(d, 1.0), H, beta)


def thermalizer(H: Hamiltonian, beta: BetaLike) -> ETOChannel:
    """Rank-one map onto the Gibbs state with all coherences destroyed."""
    d = H.dimension
    rows = np.tile(gibbs_vector(H, beta), (d, 1))
    return build_eto(TransitionMatrix(rows), DampingFactors.uniform(d, 0.0), H, beta)


def random_gibbs_stochastic(gibbs: np.ndarray, rng: np.random.Generator) -> TransitionMatrix:
    """
    Random G with detailed balance gibbs_i G_ij = S_ij for a symmetric S >= 0,
    scaled so every row keeps a non-negative stay probability.
    """
    gibbs = np.asarray(gibbs, dtype=float)
    d = gibbs.size
    upper = np.triu(rng.random((d, d)), k=1)
    flows = upper + upper.T
    row_mass = flows.sum(axis=1) / gibbs
    if row_mass.max() > 0:
        flows *= rng.uniform(0.05, 1.0) / row_mass.max()
    G = flows / gibbs[:, None]  # pylint: disable=invalid-name
    np.fill_diagonal(G, 1.0 - G.sum(axis=1))
    return TransitionMatrix(G)


def random_correlation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random complex Gram matrix with unit diagonal."""
    vectors = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors @ vectors.conj().T


def random_damping_factors(G: TransitionMatrix, rng: np.random.Generator,
                           scale: Optional[float] = None) -> DampingFactors:
    """
    alpha_ij = s sqrt(p(i->i) p(j->j)) C_ij for a random correlation C.

    The damping matrix is then (1-s) diag + s D^{1/2} C D^{1/2}, positive for
    s in [0, 1]; larger ``scale`` values reach outside the cone.
    """
    scale = rng.uniform(0.0, 1.0) if scale is None else scale
    alpha = scale * minor_bound(G) * random_correlation(G.dimension, rng)
    return DampingFactors(0.5 * (alpha + alpha.conj().T))


def random_eto_channel(H: Hamiltonian, beta: BetaLike, rng: np.random.Generator) -> ETOChannel:
    """A random valid channel for property tests."""
    G = random_gibbs_stochastic(gibbs_vector(H, beta), rng)  # pylint: disable=invalid-name
    return build_eto(G, random_damping_factors(G, rng), H, beta)


def gibbs_fixed_point_error(ch: ETOChannel) -> float:
    """max |Lambda(tau) - tau|."""
    tau = gibbs_state(ch.H, ch.beta).matrix
    return float(np.max(np.abs(_apply_matrix(ch, tau) - tau)))
