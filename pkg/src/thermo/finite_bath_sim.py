"""
Finite-bath realization of thermal operations.

A system with commensurate levels is coupled to a ladder bath with rungs
0, eps, 2 eps, ... of degeneracy g(k). Product states with the same total
energy form a block; a direct sum of block unitaries conserves energy and
induces a channel on the system by tracing out the bath.

Indices used throughout: ``m`` is the total energy of a block in quanta,
``k`` a bath rung and ``n_i`` the quanta of system level i, so the segment
of level i inside block m sits on rung m - n_i.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from src.config import config
from src.exceptions import (
    BathConstructionError, DimensionMismatchError, IncommensurateSpectrumError,
    LayoutTooLargeError, NonUnitaryBlockError, PreconditionError, RegimeViolationError,
    ValidationError
)
from src.thermo.coherence_bounds import (
    DampingFactors, TransitionMatrix, qubit_kappa, qubit_transition_probs
)
from src.thermo.core import (
    BetaLike, Hamiltonian, InverseTemperature, as_beta, bohr_spectrum, gibbs_vector,
    random_unitary
)
from src.thermo.degeneracy_models import DegeneracyModelFactory
from src.thermo.eto_channels import ETOChannel, build_eto
from src.utils.logger import logger


@dataclass(frozen=True)
class BathSpec:
    """Ladder bath with rung energies k * quantum and degeneracies g(k)."""
    quantum: float
    degeneracies: tuple[int, ...]
    beta: InverseTemperature
    mode: str = "exact_geometric"
    delta: float = 0.0
    exponent: float = 0.0
    tail_mass: float = 0.0

    def __post_init__(self):
        if not self.degeneracies or min(self.degeneracies) < 1:
            raise BathConstructionError("degeneracies must be positive integers")
        if any(b < a for a, b in zip(self.degeneracies, self.degeneracies[1:])):
            raise BathConstructionError(
                f"degeneracies must be non-decreasing, got {list(self.degeneracies)}")

    @property
    def n_rungs(self) -> int:
        """Number of rungs N."""
        return len(self.degeneracies)

    @property
    def energies(self) -> np.ndarray:
        """Rung energies k * quantum."""
        return self.quantum * np.arange(self.n_rungs)

    @property
    def dimension(self) -> int:
        """Total bath dimension."""
        return int(sum(self.degeneracies))

    @property
    def weights(self) -> np.ndarray:
        """Gibbs weight of each rung, w_k proportional to g(k) e^(-beta k eps)."""
        log_w = np.log(np.asarray(self.degeneracies, dtype=float)) - self.beta.beta * self.energies
        weights = np.exp(log_w - log_w.max())
        return weights / weights.sum()


def energy_quantum(H: Hamiltonian, tol: Optional[float] = None,
                   max_denominator: int = 1000) -> tuple[float, tuple[int, ...]]:
    """
    Largest eps such that every level is an integer multiple of it.

    Returns eps and the level energies in units of eps.
    """
    tol = config.tolerances.bohr_gap if tol is None else tol
    energies = H.energies
    nonzero = energies[energies > tol]
    if nonzero.size == 0:
        raise BathConstructionError("system has no nonzero energy gap")
    base = float(nonzero.min())

    fractions = [Fraction(float(e) / base).limit_denominator(max_denominator) for e in energies]
    for energy, frac in zip(energies, fractions):
        if abs(float(frac) * base - energy) > tol * max(1.0, abs(energy)):
            raise IncommensurateSpectrumError(H.levels)

    denominator = lcm(*(f.denominator for f in fractions))
    integers = [f.numerator * (denominator // f.denominator) for f in fractions]
    common = gcd(*integers)
    return base * common / denominator, tuple(i // common for i in integers)


def build_bath(H: Hamiltonian, beta: BetaLike, n_rungs: Optional[int] = None,
               mode: Optional[str] = None, **model_kwargs) -> BathSpec:
    """
    Builds the ladder bath matched to the system's energy quantum.

    ``model_kwargs`` go to the degeneracy model (``scale`` for
    exact_geometric, ``copies`` for multinomial).
    """
    beta = as_beta(beta)
    n_rungs = config.bath.default_rungs if n_rungs is None else n_rungs
    mode = config.bath.mode if mode is None else mode
    quantum, quanta = energy_quantum(H)
    if n_rungs <= max(quanta):
        raise BathConstructionError(
            f"{n_rungs} rungs leave no block holding every level (top level at {max(quanta)} quanta)")

    ratio = float(np.exp(beta.beta * quantum))
    model = DegeneracyModelFactory.create(mode, ratio=ratio, **model_kwargs)
    profile = model.profile(n_rungs)
    g = np.asarray(profile.degeneracies, dtype=float)
    exponent = float(min(np.log(g[k] / g[0]) / (k * quantum) for k in range(1, g.size))) \
        if g.size > 1 else 0.0

    logger.debug("Built %s bath: eps=%.6g, g=%s, delta=%.3e", mode, quantum,
                 list(profile.degeneracies), profile.delta)
    return BathSpec(quantum=quantum, degeneracies=profile.degeneracies, beta=beta, mode=mode,
                    delta=profile.delta, exponent=exponent, tail_mass=profile.tail_mass)


@dataclass(frozen=True)
class Segment:
    """System level ``level`` paired with bath rung ``rung`` inside a block."""
    level: int
    rung: int
    offset: int
    dimension: int

    @property
    def slice(self) -> slice:
        """Rows/columns of the segment inside its block."""
        return slice(self.offset, self.offset + self.dimension)


@dataclass(frozen=True)
class EnergyBlock:
    """All product states with total energy ``total`` quanta."""
    total: int
    segments: tuple[Segment, ...]
    boundary: bool

    @property
    def dimension(self) -> int:
        """Sum of segment dimensions."""
        return sum(s.dimension for s in self.segments)

    def segment(self, level: int) -> Optional[Segment]:
        """Segment of a system level, None when the level is absent."""
        for seg in self.segments:
            if seg.level == level:
                return seg
        return None


@dataclass(frozen=True)
class EnergyBlockLayout:
    """Blocks in increasing total energy plus the product-basis bookkeeping."""
    blocks: tuple[EnergyBlock, ...]
    level_quanta: tuple[int, ...]
    degeneracies: tuple[int, ...]
    quantum: float
    _index: Dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update({block.total: pos for pos, block in enumerate(self.blocks)})

    @property
    def system_dimension(self) -> int:
        """Number of system levels d."""
        return len(self.level_quanta)

    @property
    def dimension(self) -> int:
        """Dimension of system times bath."""
        return self.system_dimension * int(sum(self.degeneracies))

    def block(self, total: int) -> Optional[EnergyBlock]:
        """Block at total energy ``total`` quanta."""
        pos = self._index.get(total)
        return None if pos is None else self.blocks[pos]

    def position(self, total: int) -> Optional[int]:
        """Index of the block at ``total`` in ``blocks``."""
        return self._index.get(total)

    def block_of(self, level: int, rung: int) -> EnergyBlock:
        """Block containing the segment (level, rung)."""
        return self.blocks[self._index[rung + self.level_quanta[level]]]

    def interior(self) -> List[EnergyBlock]:
        """Blocks that contain every system level."""
        return [block for block in self.blocks if not block.boundary]

    def product_indices(self, block: EnergyBlock) -> np.ndarray:
        """Positions of the block's states in the system-major product basis."""
        bath_offsets = np.concatenate([[0], np.cumsum(self.degeneracies)])
        bath_dim = int(bath_offsets[-1])
        return np.concatenate([
            seg.level * bath_dim + bath_offsets[seg.rung] + np.arange(seg.dimension)
            for seg in block.segments
        ]).astype(int)


def enumerate_blocks(H: Hamiltonian, bath: BathSpec,
                     cap: Optional[int] = None) -> EnergyBlockLayout:
    """
    Splits H_S (x) H_R into total-energy blocks.

    Segments inside a block are ordered by system level. A block is
    boundary when some level has no bath rung left to pair with.
    """
    cap = config.bath.max_dimension if cap is None else cap
    quanta = []
    for energy in H.energies:
        count = int(round(energy / bath.quantum))
        if abs(count * bath.quantum - energy) > config.tolerances.bohr_gap * max(1.0, energy):
            raise IncommensurateSpectrumError(H.levels)
        quanta.append(count)

    dimension = H.dimension * bath.dimension
    if dimension > cap:
        raise LayoutTooLargeError(dimension, cap)

    blocks = []
    for total in range(max(quanta) + bath.n_rungs):
        segments, offset = [], 0
        for level, n_level in enumerate(quanta):
            rung = total - n_level
            if 0 <= rung < bath.n_rungs:
                size = bath.degeneracies[rung]
                segments.append(Segment(level=level, rung=rung, offset=offset, dimension=size))
                offset += size
        if segments:
            blocks.append(EnergyBlock(total=total, segments=tuple(segments),
                                      boundary=len(segments) < H.dimension))

    logger.debug("Enumerated %d blocks (%d interior), dimension %d", len(blocks),
                 sum(not b.boundary for b in blocks), dimension)
    return EnergyBlockLayout(blocks=tuple(blocks), level_quanta=tuple(quanta),
                             degeneracies=bath.degeneracies, quantum=bath.quantum)


@dataclass(frozen=True, eq=False)
class BlockUnitary:
    """Direct sum of per-block unitaries aligned with ``layout.blocks``."""
    layout: EnergyBlockLayout
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.layout.blocks):
            raise DimensionMismatchError(len(self.layout.blocks), len(self.blocks), "block count")
        tol = config.tolerances.unitary
        frozen = []
        for pos, (matrix, block) in enumerate(zip(self.blocks, self.layout.blocks)):
            matrix = np.array(matrix, dtype=complex)
            if matrix.shape != (block.dimension, block.dimension):
                raise DimensionMismatchError(block.dimension, matrix.shape[0],
                                             f"block {pos} unitary")
            deviation = float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(block.dimension))))
            if deviation > tol:
                raise NonUnitaryBlockError(pos, deviation)
            matrix.setflags(write=False)
            frozen.append(matrix)
        object.__setattr__(self, "blocks", tuple(frozen))

    @property
    def boundary_identity(self) -> bool:
        """True when every boundary block acts as the identity."""
        return all(np.allclose(matrix, np.eye(matrix.shape[0]))
                   for matrix, block in zip(self.blocks, self.layout.blocks) if block.boundary)

    def embed(self, cap: Optional[int] = None) -> np.ndarray:
        """Full matrix on the system-major product basis."""
        cap = config.bath.max_dimension if cap is None else cap
        dimension = self.layout.dimension
        if dimension > cap:
            raise LayoutTooLargeError(dimension, cap)
        full = np.zeros((dimension, dimension), dtype=complex)
        for matrix, block in zip(self.blocks, self.layout.blocks):
            idx = self.layout.product_indices(block)
            full[np.ix_(idx, idx)] = matrix
        return full


def identity_unitary(layout: EnergyBlockLayout) -> BlockUnitary:
    """Identity on every block."""
    return BlockUnitary(layout, tuple(np.eye(b.dimension) for b in layout.blocks))


def swap_unitary(layout: EnergyBlockLayout) -> BlockUnitary:
    """
    Qubit swap: in every two-segment block the first min(D0, D1) ground and
    excited states are exchanged, the rest is left alone.
    """
    if layout.system_dimension != 2:
        raise DimensionMismatchError(2, layout.system_dimension, "system")
    matrices = []
    for block in layout.blocks:
        matrix = np.eye(block.dimension, dtype=complex)
        ground, excited = block.segment(0), block.segment(1)
        if ground is not None and excited is not None:
            for t in range(min(ground.dimension, excited.dimension)):
                g, e = ground.offset + t, excited.offset + t
                matrix[[g, e], [g, e]] = 0.0
                matrix[g, e] = matrix[e, g] = 1.0
        matrices.append(matrix)
    return BlockUnitary(layout, tuple(matrices))


def verify_energy_conservation(U: Union[BlockUnitary, np.ndarray], layout: EnergyBlockLayout,
                               tol: float = 1e-10) -> bool:
    """max |[U, H_S (x) 1 + 1 (x) H_R]| <= tol on the product basis."""
    full = U.embed() if isinstance(U, BlockUnitary) else np.asarray(U, dtype=complex)
    if full.shape != (layout.dimension, layout.dimension):
        raise DimensionMismatchError(layout.dimension, full.shape[0], "unitary")
    rung_quanta = np.concatenate([np.full(g, k) for k, g in enumerate(layout.degeneracies)])
    totals = np.concatenate([n + rung_quanta for n in layout.level_quanta]) * layout.quantum
    commutator = full * (totals[None, :] - totals[:, None])
    return bool(np.max(np.abs(commutator)) <= tol)


@dataclass(frozen=True, eq=False)
class InducedChannel:
    """
    Channel tr_R(U (rho (x) tau_R) U^dag) on every basis element.

    ``transfer[i, j, a, b]`` is the (a, b) entry of Lambda(|i><j|).
    ``G``/``alpha`` use every rung; the ``_interior`` versions keep only rungs
    whose blocks contain every level and renormalize.
    """
    transfer: np.ndarray
    G: np.ndarray  # pylint: disable=invalid-name
    alpha: np.ndarray
    G_interior: np.ndarray  # pylint: disable=invalid-name
    alpha_interior: np.ndarray
    boundary_mass: float
    mode_leakage: float

    def transition_matrix(self, interior: bool = False) -> TransitionMatrix:
        """Populations as a validated TransitionMatrix."""
        return TransitionMatrix(self.G_interior if interior else self.G)

    def damping_factors(self, interior: bool = False) -> DampingFactors:
        """Coherence factors as validated DampingFactors."""
        return DampingFactors(self.alpha_interior if interior else self.alpha)

    def to_channel(self, H: Hamiltonian, beta: BetaLike) -> ETOChannel:
        """The full induced map as an ETOChannel."""
        return build_eto(self.transition_matrix(), self.damping_factors(), H, beta)


def _rung_contribution(U: BlockUnitary, layout: EnergyBlockLayout, rung: int):
    """Unweighted Lambda(|i><j|) from bath state |rung, t> summed over t, and interior flags."""
    d = layout.system_dimension
    quanta = layout.level_quanta
    n_rungs = len(layout.degeneracies)
    out = np.zeros((d, d, d, d), dtype=complex)
    interior = np.zeros((d, d), dtype=bool)
    for i in range(d):
        pos_i = layout.position(rung + quanta[i])
        block_i, u_i = layout.blocks[pos_i], U.blocks[pos_i]
        in_i = block_i.segment(i).slice
        for j in range(d):
            pos_j = layout.position(rung + quanta[j])
            block_j, u_j = layout.blocks[pos_j], U.blocks[pos_j]
            in_j = block_j.segment(j).slice
            interior[i, j] = not (block_i.boundary or block_j.boundary)
            for a in range(d):
                out_rung = block_i.total - quanta[a]
                if not 0 <= out_rung < n_rungs:
                    continue
                for b in range(d):
                    if block_j.total - quanta[b] != out_rung:
                        continue
                    seg_a, seg_b = block_i.segment(a), block_j.segment(b)
                    out[i, j, a, b] = np.vdot(u_j[seg_b.slice, in_j], u_i[seg_a.slice, in_i])
    return out, interior


def induced_channel(U: BlockUnitary, layout: EnergyBlockLayout, bath: BathSpec,
                    H: Optional[Hamiltonian] = None, strict: bool = True) -> InducedChannel:
    """
    Exact partial trace over the finite bath, one rung at a time.

    Rung contributions are computed in a thread pool and summed in rung
    order. Given a nondegenerate ``H``, the map must send each |i><j| to a
    multiple of itself: leakage between modes raises PreconditionError, or
    only logs a warning with ``strict=False``.
    """
    if U.layout is not layout and U.layout.blocks != layout.blocks:
        raise ValidationError("block unitary was built for a different layout", field="U")
    d = layout.system_dimension
    if H is not None and H.dimension != d:
        raise DimensionMismatchError(d, H.dimension, "Hamiltonian")

    weights = bath.weights
    with ThreadPoolExecutor(max_workers=config.bath.max_workers) as executor:
        contributions = list(executor.map(lambda k: _rung_contribution(U, layout, k),
                                          range(bath.n_rungs)))

    transfer = np.zeros((d, d, d, d), dtype=complex)
    interior_sum = np.zeros((d, d, d, d), dtype=complex)
    interior_weight = np.zeros((d, d))
    for k, (out, interior) in enumerate(contributions):
        scale = weights[k] / bath.degeneracies[k]
        transfer += scale * out
        interior_sum += scale * out * interior[:, :, None, None]
        interior_weight += weights[k] * interior

    safe = np.where(interior_weight > 0, interior_weight, 1.0)
    interior_transfer = interior_sum / safe[:, :, None, None]

    idx = np.arange(d)
    G = np.real(transfer[idx, idx][:, idx, idx])  # pylint: disable=invalid-name
    G_interior = np.real(interior_transfer[idx, idx][:, idx, idx])  # pylint: disable=invalid-name
    alpha = transfer[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]
    alpha_interior = interior_transfer[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]

    gibbs = gibbs_vector(Hamiltonian(tuple(n * bath.quantum for n in layout.level_quanta)),
                         bath.beta)
    boundary_mass = float(sum(
        gibbs[seg.level] * weights[seg.rung]
        for block in layout.blocks if block.boundary for seg in block.segments))

    leakage = 0.0
    for i in range(d):
        for j in range(d):
            mask = np.ones((d, d), dtype=bool)
            if i == j:
                np.fill_diagonal(mask, False)
            else:
                mask[i, j] = False
            leakage = max(leakage, float(np.max(np.abs(transfer[i, j][mask]))))
    if H is not None and d > 1 and bohr_spectrum(H).nondegenerate \
            and leakage > config.tolerances.unitary:
        if strict:
            raise PreconditionError(
                f"induced map mixes coherence modes (leakage {leakage:.3e}) although the "
                f"Bohr spectrum of {H.levels} is nondegenerate", quantity="mode_leakage")
        logger.warning("Mode leakage %.3e on a nondegenerate spectrum", leakage)

    return InducedChannel(transfer=transfer, G=G, alpha=alpha, G_interior=G_interior,
                          alpha_interior=alpha_interior, boundary_mass=boundary_mass,
                          mode_leakage=leakage)


def coherence_factor(U: Union[BlockUnitary, Sequence[np.ndarray]], layout: EnergyBlockLayout,
                     bath: BathSpec, i: int = 0, j: int = 1,
                     interior_only: bool = True) -> complex:
    """
    alpha_ij alone, without the full transfer tensor.

    Raw block matrices are accepted so that a search can score candidates
    without re-validating unitarity.
    """
    matrices = U.blocks if isinstance(U, BlockUnitary) else tuple(U)
    quanta = layout.level_quanta
    weights = bath.weights
    total, norm = 0.0 + 0.0j, 0.0
    for k in range(bath.n_rungs):
        pos_i, pos_j = layout.position(k + quanta[i]), layout.position(k + quanta[j])
        block_i, block_j = layout.blocks[pos_i], layout.blocks[pos_j]
        if interior_only and (block_i.boundary or block_j.boundary):
            continue
        seg_i, seg_j = block_i.segment(i).slice, block_j.segment(j).slice
        overlap = np.vdot(matrices[pos_j][seg_j, seg_j], matrices[pos_i][seg_i, seg_i])
        total += weights[k] / bath.degeneracies[k] * overlap
        norm += weights[k]
    if interior_only:
        return total / norm if norm > 0 else 0.0j
    return total


def suggest_bath_scale(p11: float, max_denominator: int = 64) -> int:
    """Multiplier s for g = s r^k that makes g(0) p(1->1) an integer."""
    if not 0.0 <= p11 <= 1.0:
        raise ValidationError(f"p(1->1)={p11} outside [0, 1]", field="p11")
    return Fraction(p11).limit_denominator(max_denominator).denominator


@dataclass(frozen=True, eq=False)
class StaircaseUnitary:
    """Optimal qubit block unitary and the rounding error of its first block."""
    unitary: BlockUnitary
    seed: str
    rounding_error: float


def optimal_qubit_unitary(G_target: TransitionMatrix, layout: EnergyBlockLayout,
                          bath: BathSpec, seed: str = "binary") -> StaircaseUnitary:
    """
    Staircase of 2x2 rotations saturating the qubit coherence bound.

    In interior block m the excited segment (rung m-1) is paired with the
    first g(m-1) ground states. With c^m the rotation cosines, the ground
    diagonal of block m is z^m = (c^m, 1, ..., 1) and c^{m+1} = gamma z^m with
    gamma = sqrt(p(1->1)/p(0->0)). Boundary blocks are the identity.
    """
    if layout.system_dimension != 2 or G_target.dimension != 2:
        raise DimensionMismatchError(2, G_target.dimension, "qubit target")
    if bath.mode != "exact_geometric":
        raise RegimeViolationError("the staircase needs an exact_geometric bath")
    p00, p11 = float(G_target.G[0, 0]), float(G_target.G[1, 1])
    if p11 > p00 + config.tolerances.curve:
        raise RegimeViolationError(f"staircase needs p(1->1) <= p(0->0), got {p11} > {p00}")
    if p00 <= 0.0:
        raise RegimeViolationError("staircase needs p(0->0) > 0")
    gamma = min(1.0, float(np.sqrt(p11 / p00)))

    g = bath.degeneracies
    rounding_error = 0.0
    if seed == "binary":
        ones = int(round(g[0] * p11))
        rounding_error = abs(ones / g[0] - p11)
        cosines = np.concatenate([np.ones(ones), np.zeros(g[0] - ones)])
    elif seed == "uniform":
        cosines = np.full(g[0], np.sqrt(p11))
    else:
        raise ValidationError(f"unknown staircase seed '{seed}'", field="seed")
    if rounding_error > 0:
        logger.warning("Staircase seed rounded %d * %.6g: diagonal error %.3e",
                       g[0], p11, rounding_error)

    matrices = []
    for block in layout.blocks:
        matrix = np.eye(block.dimension, dtype=complex)
        if not block.boundary:
            ground, excited = block.segment(0), block.segment(1)
            for t, cos in enumerate(cosines):
                sin = np.sqrt(max(0.0, 1.0 - cos ** 2))
                gi, ei = ground.offset + t, excited.offset + t
                matrix[gi, gi], matrix[ei, gi] = cos, sin
                matrix[gi, ei], matrix[ei, ei] = -sin, cos
            ground_diag = np.concatenate([cosines, np.ones(ground.dimension - cosines.size)])
            cosines = gamma * ground_diag
        matrices.append(matrix)
    return StaircaseUnitary(unitary=BlockUnitary(layout, tuple(matrices)), seed=seed,
                            rounding_error=rounding_error)


def random_block_unitary(layout: EnergyBlockLayout, rng: np.random.Generator) -> BlockUnitary:
    """Independent Haar unitaries on every block."""
    return BlockUnitary(layout, tuple(random_unitary(b.dimension, rng) for b in layout.blocks))


def random_to_channel(layout: EnergyBlockLayout, bath: BathSpec, seed: int) -> InducedChannel:
    """Induced channel of a seeded Haar-random block unitary."""
    rng = np.random.default_rng(seed)
    return induced_channel(random_block_unitary(layout, rng), layout, bath)


@dataclass(frozen=True)
class ConvergenceRow:
    """One bath size of the staircase convergence study."""
    n_rungs: int
    boundary_mass: float
    G_measured: list  # pylint: disable=invalid-name
    alpha_measured: float
    alpha_interior: float
    kappa_analytic: float
    gap: float
    rounding_error: float


def simulate_convergence(p: float, q: float, H: Hamiltonian, beta: BetaLike,
                         rungs_list: Sequence[int], seed_kind: str = "binary",
                         scale: Optional[int] = None) -> List[ConvergenceRow]:
    """
    Runs the staircase for every bath size in ``rungs_list``.

    ``gap`` is sqrt(p(0->0) p(1->1)) of the full measured channel minus its
    |alpha_01|; the interior coherence matches kappa exactly.
    """
    dE = H.levels[1]
    target = qubit_transition_probs(p, q, beta, dE)
    kappa = qubit_kappa(p, q, beta, dE)
    if scale is None:
        scale = suggest_bath_scale(float(target.G[1, 1])) if seed_kind == "binary" else 1

    rows = []
    for n_rungs in rungs_list:
        bath = build_bath(H, beta, n_rungs, "exact_geometric", scale=scale)
        layout = enumerate_blocks(H, bath)
        staircase = optimal_qubit_unitary(target, layout, bath, seed=seed_kind)
        channel = induced_channel(staircase.unitary, layout, bath, H)
        alpha = abs(complex(channel.alpha[0, 1]))
        bound = float(np.sqrt(channel.G[0, 0] * channel.G[1, 1]))
        rows.append(ConvergenceRow(
            n_rungs=n_rungs,
            boundary_mass=channel.boundary_mass,
            G_measured=channel.G.tolist(),
            alpha_measured=alpha,
            alpha_interior=abs(complex(channel.alpha_interior[0, 1])),
            kappa_analytic=kappa,
            gap=bound - alpha,
            rounding_error=staircase.rounding_error,
        ))
        logger.debug("Staircase at %d rungs: alpha=%.10f gap=%.3e", n_rungs, alpha, bound - alpha)
    return rows
