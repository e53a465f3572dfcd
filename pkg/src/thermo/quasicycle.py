"""
The qutrit quasi-cycle 2 -> 0 -> 1 -> 2 and the limits it places on coherence processing.

Forbidding 2->2, 2->1, 1->0 and 0->2 fixes every other transition
probability. Any finite-bath unitary that realizes the cycle exactly is a
direct sum of partial isometries on the diagonal blocks, and that is
incompatible with saturating the coherence bound. The perturbed family
gives each forbidden transition probability epsilon, and a seeded search
looks for unitaries that realize it with more coherence.

Matrices are stored in (0, 1, 2) order; ``descending_view`` gives the
(2, 1, 0) layout.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lstsq, polar

from src.config import config
from src.exceptions import (
    DimensionMismatchError, DomainError, InadmissiblePerturbationError, PreconditionError,
    RegimeViolationError, ValidationError
)
from src.thermo.coherence_bounds import TransitionMatrix
from src.thermo.core import Hamiltonian, InverseTemperature, as_beta, gibbs_vector, random_unitary
from src.thermo.finite_bath_sim import (
    BathSpec, BlockUnitary, EnergyBlock, EnergyBlockLayout, build_bath, coherence_factor,
    enumerate_blocks, induced_channel
)
from src.utils.logger import logger

FORBIDDEN = ((2, 2), (2, 1), (1, 0), (0, 2))


@dataclass(frozen=True)
class QuasiCycleSpec:
    """Gaps E2 - E1 < E2 - E0, inverse temperature and perturbation strength."""
    dE21: float  # pylint: disable=invalid-name
    dE20: float  # pylint: disable=invalid-name
    beta: InverseTemperature
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", as_beta(self.beta))
        if not 0.0 < self.dE21 < self.dE20:
            raise ValidationError(
                f"need 0 < dE21 < dE20, got dE21={self.dE21}, dE20={self.dE20}", field="dE21")
        if self.beta.is_infinite_temperature:
            raise DomainError("the quasi-cycle needs beta > 0")
        if self.epsilon < 0:
            raise InadmissiblePerturbationError(self.epsilon, admissible_epsilon(self))

    @property
    def a(self) -> float:
        """e^(-beta dE21)."""
        return float(np.exp(-self.beta.beta * self.dE21))

    @property
    def b(self) -> float:
        """e^(-beta dE20)."""
        return float(np.exp(-self.beta.beta * self.dE20))

    @property
    def c(self) -> float:
        """e^(-beta dE10) = b / a."""
        return self.b / self.a

    @property
    def hamiltonian(self) -> Hamiltonian:
        """Levels (0, dE20 - dE21, dE20)."""
        return Hamiltonian((0.0, self.dE20 - self.dE21, self.dE20))

    @classmethod
    def from_factors(cls, a: float, b: float, beta: float = 1.0,
                     epsilon: float = 0.0) -> "QuasiCycleSpec":
        """Cycle with e^(-beta dE21) = a and e^(-beta dE20) = b."""
        if not 0.0 < b < a < 1.0:
            raise ValidationError(f"need 0 < b < a < 1, got a={a}, b={b}", field="a")
        return cls(dE21=-np.log(a) / beta, dE20=-np.log(b) / beta, beta=beta, epsilon=epsilon)


def _cycle_matrix(a: float, b: float, eps: float) -> np.ndarray:
    c = b / a
    return np.array([
        [1.0 - b * (1 - 2 * eps) - c * eps, b * (1 - 2 * eps) + (c - 1) * eps, eps],
        [eps, (1 - a) * (1 - eps) + eps / c, a * (1 - eps) - eps / c],
        [1.0 - 2 * eps, eps, eps],
    ])


def quasicycle_probs(spec: QuasiCycleSpec) -> TransitionMatrix:
    """The unique Gibbs-stochastic matrix with the four forbidden transitions at zero."""
    return TransitionMatrix(_cycle_matrix(spec.a, spec.b, 0.0))


def admissible_epsilon(spec: QuasiCycleSpec) -> float:
    """Largest epsilon keeping every entry of the perturbed matrix in [0, 1]."""
    base = _cycle_matrix(spec.a, spec.b, 0.0)
    slope = _cycle_matrix(spec.a, spec.b, 1.0) - base
    limits = [1.0]
    for value, rate in zip(base.ravel(), slope.ravel()):
        if rate > 0:
            limits.append((1.0 - value) / rate)
        elif rate < 0:
            limits.append(value / -rate)
    return float(min(limits))


def perturbed_probs(spec: QuasiCycleSpec, epsilon: Optional[float] = None) -> TransitionMatrix:
    """
    Perturbed cycle with p(2->2) = p(2->1) = p(1->0) = p(0->2) = epsilon.

    The remaining entries are
    p(2->0) = 1 - 2 eps, p(1->2) = a(1 - eps) - eps/c,
    p(1->1) = (1 - a)(1 - eps) + eps/c, p(0->1) = b(1 - 2 eps) + (c - 1) eps,
    p(0->0) = 1 - b(1 - 2 eps) - c eps.
    """
    eps = spec.epsilon if epsilon is None else float(epsilon)
    eps_max = admissible_epsilon(spec)
    if eps < 0 or eps > eps_max + config.tolerances.trace:
        raise InadmissiblePerturbationError(eps, eps_max)
    return TransitionMatrix(_cycle_matrix(spec.a, spec.b, eps))


def perturbation_slope(spec: QuasiCycleSpec, samples: int = 10) -> float:
    """Measured C in max |perturbed(eps) - exact| <= C eps over the admissible range."""
    exact = _cycle_matrix(spec.a, spec.b, 0.0)
    eps_max = admissible_epsilon(spec)
    return float(max(np.max(np.abs(_cycle_matrix(spec.a, spec.b, eps) - exact)) / eps
                     for eps in np.linspace(eps_max / samples, eps_max, samples)))


def descending_view(G) -> np.ndarray:
    """Matrix reindexed to (2, 1, 0) order."""
    matrix = G.G if isinstance(G, TransitionMatrix) else np.asarray(G)
    return matrix[::-1, ::-1].copy()


def quasicycle_effect(spec: QuasiCycleSpec, diag: Sequence[float],
                      ordering: str = "012") -> np.ndarray:
    """Populations after the cycle; ``ordering`` applies to input and output."""
    diag = np.asarray(diag, dtype=float)
    if diag.size != 3:
        raise DimensionMismatchError(3, diag.size, "population vector")
    G = perturbed_probs(spec).G  # pylint: disable=invalid-name
    if ordering == "210":
        return diag @ descending_view(G)
    if ordering != "012":
        raise ValidationError(f"unknown ordering '{ordering}'", field="ordering")
    return diag @ G


@dataclass(frozen=True, eq=False)
class ConstraintSolution:
    """Least-squares solve of the Gibbs-stochastic constraints."""
    G: np.ndarray  # pylint: disable=invalid-name
    residual: float
    unique: bool


def solve_transition_constraints(gibbs: Sequence[float],
                                 fixed: Dict[Tuple[int, int], float]) -> ConstraintSolution:
    """
    Solves sum_j G_ij = 1 and sum_i gibbs_i G_ij = gibbs_j with the entries in
    ``fixed`` pinned. The solution is unique when the system has full rank.
    """
    gibbs = np.asarray(gibbs, dtype=float)
    d = gibbs.size
    rows, rhs = [], []
    for i in range(d):
        equation = np.zeros((d, d))
        equation[i, :] = 1.0
        rows.append(equation.ravel())
        rhs.append(1.0)
    for j in range(d):
        equation = np.zeros((d, d))
        equation[:, j] = gibbs
        rows.append(equation.ravel())
        rhs.append(gibbs[j])
    for (i, j), value in fixed.items():
        equation = np.zeros((d, d))
        equation[i, j] = 1.0
        rows.append(equation.ravel())
        rhs.append(value)

    system, target = np.array(rows), np.array(rhs)
    solution, _, rank, _ = lstsq(system, target)
    residual = float(np.max(np.abs(system @ solution - target)))
    return ConstraintSolution(G=solution.reshape(d, d), residual=residual, unique=rank == d * d)


def vonneumann_trace_bound(X, Y) -> float:
    """sup over unitaries W, V of |tr(W X V Y)|: the sum of sigma_i(X) sigma_i(Y)."""
    X, Y = np.asarray(X, dtype=complex), np.asarray(Y, dtype=complex)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatchError(X.shape[0], Y.shape[0], "trace bound operands")
    return float(np.dot(np.linalg.svd(X, compute_uv=False), np.linalg.svd(Y, compute_uv=False)))


@dataclass(frozen=True, eq=False)
class TraceOverlap:
    """Best |tr(W X V Y)| reached by polar ascent."""
    value: float
    bound: float
    W: np.ndarray  # pylint: disable=invalid-name
    V: np.ndarray  # pylint: disable=invalid-name
    iterations: int


def maximize_trace_overlap(X, Y, iterations: int = 500, rng: Optional[np.random.Generator] = None,
                           tol: float = 1e-13) -> TraceOverlap:
    """
    Alternating maximization: with V fixed the best W is the adjoint of the
    polar factor of X V Y, and symmetrically for V.
    """
    X, Y = np.asarray(X, dtype=complex), np.asarray(Y, dtype=complex)
    bound = vonneumann_trace_bound(X, Y)
    rng = np.random.default_rng(0) if rng is None else rng
    n = X.shape[0]
    W, V = random_unitary(n, rng), random_unitary(n, rng)  # pylint: disable=invalid-name
    value, step = 0.0, 0
    for step in range(1, iterations + 1):
        factor, _ = polar(X @ V @ Y)
        W = factor.conj().T  # pylint: disable=invalid-name
        factor, _ = polar(Y @ W @ X)
        V = factor.conj().T  # pylint: disable=invalid-name
        current = abs(complex(np.trace(W @ X @ V @ Y)))
        if current - value <= tol and step > 1:
            value = max(value, current)
            break
        value = current
    return TraceOverlap(value=value, bound=bound, W=W, V=V, iterations=step)


def _segments(block: EnergyBlock):
    return block.segment(0), block.segment(1), block.segment(2)


def _cycle_permutation(block: EnergyBlock) -> np.ndarray:
    """Permutation moving g(m - n2) states along 2->0, 1->2 and 0->1."""
    seg0, seg1, seg2 = _segments(block)
    if not seg0.dimension > seg1.dimension > seg2.dimension:
        raise RegimeViolationError(
            f"block {block.total} needs strictly decreasing segment dimensions, got "
            f"{seg0.dimension}, {seg1.dimension}, {seg2.dimension}")
    moved = seg2.dimension
    perm = np.zeros((block.dimension, block.dimension))
    for t in range(seg2.dimension):
        perm[seg0.offset + t, seg2.offset + t] = 1.0
    for t in range(seg1.dimension):
        target = seg2.offset + t if t < moved else seg1.offset + t
        perm[target, seg1.offset + t] = 1.0
    for t in range(seg0.dimension):
        target = seg1.offset + t if t < moved else seg0.offset + t
        perm[target, seg0.offset + t] = 1.0
    return perm


def _check_qutrit(layout: EnergyBlockLayout):
    if layout.system_dimension != 3:
        raise DimensionMismatchError(3, layout.system_dimension, "system")
    if not layout.interior():
        raise RegimeViolationError("bath has no block holding all three levels")


def brute_quasicycle_unitary(layout: EnergyBlockLayout) -> BlockUnitary:
    """Direct sum of permutations realizing the exact cycle on interior blocks."""
    _check_qutrit(layout)
    return BlockUnitary(layout, tuple(
        np.eye(block.dimension) if block.boundary else _cycle_permutation(block)
        for block in layout.blocks))


@dataclass(frozen=True)
class NoGoReport:
    """Structure of an exact realization and its distance from coherence saturation."""
    saturation_possible: bool
    zero_block_max: float
    singular_values_binary: bool
    singular_value_deviation: float
    gap: float
    witness_rung: int
    unit_counts: Tuple[int, int]
    alpha: float
    bound: float


def transition_block(U: np.ndarray, block: EnergyBlock, source: int, target: int) -> np.ndarray:
    """u_(source -> target): rows of the target segment, columns of the source segment."""
    return U[block.segment(target).slice, block.segment(source).slice]


def _unit_count(matrix: np.ndarray) -> int:
    return int(np.sum(np.linalg.svd(matrix, compute_uv=False) > 0.5))


def nogo_check(U: BlockUnitary, layout: EnergyBlockLayout, bath: BathSpec,
               spec: QuasiCycleSpec, tol: float = 1e-10,
               sv_tol: Optional[float] = None) -> NoGoReport:
    """
    Verifies that U realizes the exact cycle and measures why it cannot
    saturate the coherence bound.

    The alpha_01 contribution of rung k pairs u_(0->0) of block k with
    u_(1->1) of block k + n1, and Cauchy-Schwarz is tight only when they are
    parallel. Both are partial isometries with different numbers of unit
    singular values, so the reported gap is strictly positive.
    """
    sv_tol = config.tolerances.sv if sv_tol is None else sv_tol
    _check_qutrit(layout)
    channel = induced_channel(U, layout, bath)
    target = quasicycle_probs(spec).G
    deviation = np.abs(channel.G_interior - target)
    if deviation.max() > tol:
        i, j = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
        raise PreconditionError(
            f"unitary gives p({i}->{j}) = {channel.G_interior[i, j]:.12g}, the cycle needs "
            f"{target[i, j]:.12g}", quantity=f"p({i}->{j})")

    zero_max, sv_dev = 0.0, 0.0
    for matrix, block in zip(U.blocks, layout.blocks):
        if block.boundary:
            continue
        for source, dest in FORBIDDEN:
            zero_max = max(zero_max, float(np.max(np.abs(transition_block(matrix, block, source,
                                                                          dest)))))
        for level in (0, 1):
            values = np.linalg.svd(transition_block(matrix, block, level, level),
                                   compute_uv=False)
            sv_dev = max(sv_dev, float(np.max(np.minimum(values, np.abs(values - 1.0)))))

    n1 = layout.level_quanta[1]
    best_gap, witness, counts = np.inf, -1, (0, 0)
    for k in range(bath.n_rungs):
        ground_pos, excited_pos = layout.position(k), layout.position(k + n1)
        if ground_pos is None or excited_pos is None:
            continue
        ground_block, excited_block = layout.blocks[ground_pos], layout.blocks[excited_pos]
        if ground_block.boundary or excited_block.boundary:
            continue
        u00 = transition_block(U.blocks[ground_pos], ground_block, 0, 0)
        u11 = transition_block(U.blocks[excited_pos], excited_block, 1, 1)
        gap = float(np.linalg.norm(u00) * np.linalg.norm(u11) - abs(np.vdot(u11, u00)))
        if gap < best_gap:
            best_gap, witness, counts = gap, k, (_unit_count(u00), _unit_count(u11))
    if witness < 0:
        raise RegimeViolationError("no rung pairs two interior blocks; add rungs to the bath")

    bound = float(np.sqrt(target[0, 0] * target[1, 1]))
    alpha = abs(complex(channel.alpha_interior[0, 1]))
    logger.info("No-go check: gap %.3e at rung %d, alpha %.6f vs bound %.6f",
                best_gap, witness, alpha, bound)
    return NoGoReport(
        saturation_possible=not best_gap > config.tolerances.sv,
        zero_block_max=zero_max,
        singular_values_binary=sv_dev <= sv_tol,
        singular_value_deviation=sv_dev,
        gap=best_gap,
        witness_rung=witness,
        unit_counts=counts,
        alpha=alpha,
        bound=bound,
    )


# (first slot kind, second slot kind); a rotation of weight s moves s of the
# first slot's amplitude into the second slot's segment and vice versa
PAIR_KINDS = {
    "A": ("0<-2", "2<-1"),
    "B": ("0<-2", "1<-0"),
    "C": ("1<-0", "2<-1"),
    "D": ("0<-0", "2<-1"),
}


def required_rotation_weight(dims: Tuple[int, int, int], eps: float) -> Dict[str, float]:
    """Total sin^2 each pair kind must carry to shift the perturbed mass in one block."""
    d0, d1, d2 = dims
    return {"A": eps * d2, "B": eps * d2, "C": eps * (d0 - d1 + d2), "D": eps * (d1 - d2)}


@dataclass
class _SearchBlock:
    """Mutable search state of one interior block: U = W R(s) P V."""
    position: int
    perm: np.ndarray
    segments: Tuple[slice, slice, slice]
    pairs: Dict[str, List[Tuple[int, int]]]
    weights: Dict[str, np.ndarray]
    W: np.ndarray = field(default=None)  # pylint: disable=invalid-name
    V: np.ndarray = field(default=None)  # pylint: disable=invalid-name
    U: np.ndarray = field(default=None)  # pylint: disable=invalid-name

    def rotation(self) -> np.ndarray:
        """R(s) from the current pair weights."""
        rot = np.eye(self.perm.shape[0], dtype=complex)
        for kind, slots in self.pairs.items():
            for (first, second), weight in zip(slots, self.weights[kind]):
                cos, sin = np.sqrt(1.0 - weight), np.sqrt(weight)
                rot[first, first], rot[second, first] = cos, sin
                rot[first, second], rot[second, second] = -sin, cos
        return rot

    def rebuild(self):
        """Recomputes U from W, R, P and V."""
        self.U = self.W @ self.rotation() @ self.perm @ self.V

    def copy(self) -> "_SearchBlock":
        """Deep copy of the mutable state."""
        return _SearchBlock(self.position, self.perm, self.segments, self.pairs,
                            {k: v.copy() for k, v in self.weights.items()},
                            self.W.copy(), self.V.copy(), self.U.copy())


def _seat_pairs(block: EnergyBlock, eps: float) -> Optional[_SearchBlock]:
    """Places m = D2 // 3 pairs per kind; None when the block cannot carry the weight."""
    seg0, seg1, seg2 = _segments(block)
    d2 = seg2.dimension
    per_kind = d2 // 3
    required = required_rotation_weight((seg0.dimension, seg1.dimension, d2), eps)
    if any(x > 0 and (per_kind == 0 or x > per_kind) for x in required.values()):
        return None
    if per_kind > seg0.dimension - d2:
        return None

    slots = {
        "0<-2": [seg0.offset + t for t in range(d2)],
        "2<-1": [seg2.offset + t for t in range(d2)],
        "1<-0": [seg1.offset + t for t in range(d2)],
        "0<-0": [seg0.offset + d2 + t for t in range(seg0.dimension - d2)],
    }
    cursor = {kind: 0 for kind in slots}
    pairs = {}
    for kind, (first_kind, second_kind) in PAIR_KINDS.items():
        taken = []
        for _ in range(per_kind):
            taken.append((slots[first_kind][cursor[first_kind]],
                          slots[second_kind][cursor[second_kind]]))
            cursor[first_kind] += 1
            cursor[second_kind] += 1
        pairs[kind] = taken
    weights = {kind: np.full(per_kind, required[kind] / per_kind if per_kind else 0.0)
               for kind in PAIR_KINDS}
    dim = block.dimension
    state = _SearchBlock(position=-1, perm=_cycle_permutation(block).astype(complex),
                         segments=(seg0.slice, seg1.slice, seg2.slice), pairs=pairs,
                         weights=weights, W=np.eye(dim, dtype=complex),
                         V=np.eye(dim, dtype=complex))
    state.rebuild()
    return state


def _givens(rng: np.random.Generator, step: float) -> np.ndarray:
    theta = step * rng.normal()
    phase = np.exp(1j * rng.uniform(0.0, 2 * np.pi))
    return np.array([[np.cos(theta), -phase * np.sin(theta)],
                     [np.conj(phase) * np.sin(theta), np.cos(theta)]])


def _propose(state: _SearchBlock, rng: np.random.Generator, step: float) -> _SearchBlock:
    """One G-preserving move: weight transfer within a pair kind or a segment-local rotation."""
    candidate = state.copy()
    move = rng.integers(3)
    if move == 0:
        kind = list(PAIR_KINDS)[rng.integers(len(PAIR_KINDS))]
        weights = candidate.weights[kind]
        if weights.size >= 2:
            first, second = rng.choice(weights.size, size=2, replace=False)
            shift = step * rng.normal() * max(weights.mean(), 1e-3)
            low = max(-weights[first], weights[second] - 1.0)
            high = min(1.0 - weights[first], weights[second])
            shift = float(np.clip(shift, low, high))
            weights[first] += shift
            weights[second] -= shift
            candidate.rebuild()
            return candidate

    segment = candidate.segments[rng.integers(3)]
    size = segment.stop - segment.start
    if size < 2:
        return candidate
    p, q = segment.start + rng.choice(size, size=2, replace=False)
    rot = _givens(rng, step)
    if move == 1:
        candidate.W[[p, q], :] = rot @ candidate.W[[p, q], :]
        candidate.U[[p, q], :] = rot @ candidate.U[[p, q], :]
    else:
        candidate.V[:, [p, q]] = candidate.V[:, [p, q]] @ rot
        candidate.U[:, [p, q]] = candidate.U[:, [p, q]] @ rot
    return candidate


@dataclass(frozen=True)
class _RestartResult:
    index: int
    alpha: float
    trace: Tuple[Tuple[int, float], ...]
    blocks: Tuple[np.ndarray, ...] = field(compare=False)


def _run_restart(index: int, seed_seq: np.random.SeedSequence, initial: List[_SearchBlock],
                 base_blocks: List[np.ndarray], layout: EnergyBlockLayout, bath: BathSpec,
                 budget: int, step: float, bound: float, trace_every: int) -> _RestartResult:
    rng = np.random.default_rng(seed_seq)
    states = [s.copy() for s in initial]
    blocks = list(base_blocks)
    for state in states:
        blocks[state.position] = state.U

    def score() -> float:
        return abs(coherence_factor(blocks, layout, bath, 0, 1, interior_only=True))

    current = best = score()
    best_blocks = tuple(b.copy() for b in blocks)
    trace = [(0, bound - best)]
    for iteration in range(1, budget + 1):
        which = rng.integers(len(states))
        candidate = _propose(states[which], rng, step)
        blocks[candidate.position] = candidate.U
        value = score()
        if value >= current:
            states[which], current = candidate, value
            if value > best:
                best, best_blocks = value, tuple(b.copy() for b in blocks)
        else:
            blocks[candidate.position] = states[which].U
        if iteration % trace_every == 0 or iteration == budget:
            trace.append((iteration, bound - best))
    return _RestartResult(index=index, alpha=best, trace=tuple(trace), blocks=best_blocks)


@dataclass(frozen=True)
class SearchReport:
    """Numerically observed coherence gap for the perturbed cycle."""
    status: str
    epsilon: float
    best_alpha: Optional[float]
    bound: float
    gap: Optional[float]
    g_error: Optional[float]
    trace: Tuple[Tuple[int, float], ...]
    budget: int
    restarts: int
    seed: int
    best_restart: Optional[int]
    note: str = ("numerical evidence from a finite seeded search; "
                 "it neither proves nor refutes that the bound is unreachable")


def conjecture_search(spec: QuasiCycleSpec, layout: EnergyBlockLayout, bath: BathSpec,
                      budget: Optional[int] = None, seed: Optional[int] = None,
                      restarts: Optional[int] = None, step: Optional[float] = None,
                      trace_every: Optional[int] = None,
                      tol_g: Optional[float] = None) -> SearchReport:
    """
    Hill climbing on interior |alpha_01| over unitaries W R(s) P V that
    realize the perturbed cycle exactly on every interior block.

    Restarts run in parallel with seeds spawned from ``seed``; the best
    alpha wins and ties go to the lowest restart index.
    """
    search = config.search
    budget = search.budget if budget is None else budget
    seed = search.seed if seed is None else seed
    restarts = search.restarts if restarts is None else restarts
    step = search.step if step is None else step
    trace_every = search.trace_every if trace_every is None else trace_every
    tol_g = config.tolerances.realize if tol_g is None else tol_g
    _check_qutrit(layout)

    target = perturbed_probs(spec).G
    bound = float(np.sqrt(target[0, 0] * target[1, 1]))

    initial, base_blocks = [], []
    for pos, block in enumerate(layout.blocks):
        base_blocks.append(np.eye(block.dimension, dtype=complex))
        if block.boundary:
            continue
        state = _seat_pairs(block, spec.epsilon)
        if state is None:
            logger.warning("Block %d cannot seat the perturbation at eps=%g", block.total,
                           spec.epsilon)
            return SearchReport(status="infeasible", epsilon=spec.epsilon, best_alpha=None,
                                bound=bound, gap=None, g_error=None, trace=(), budget=budget,
                                restarts=restarts, seed=seed, best_restart=None)
        state.position = pos
        initial.append(state)

    children = np.random.SeedSequence(seed).spawn(restarts)
    with ThreadPoolExecutor(max_workers=config.bath.max_workers) as executor:
        futures = [executor.submit(_run_restart, idx, child, initial, base_blocks, layout, bath,
                                   budget, step, bound, trace_every)
                   for idx, child in enumerate(children)]
        results = [f.result() for f in futures]

    winner = results[0]
    for result in results[1:]:
        if result.alpha > winner.alpha:
            winner = result

    unitary = BlockUnitary(layout, winner.blocks)
    channel = induced_channel(unitary, layout, bath)
    g_error = float(np.max(np.abs(channel.G_interior - target)))
    alpha = abs(complex(channel.alpha_interior[0, 1]))
    status = "gap" if g_error <= tol_g else "infeasible"
    logger.info("Search eps=%g: best alpha %.10f, bound %.10f, G error %.2e",
                spec.epsilon, alpha, bound, g_error)
    return SearchReport(status=status, epsilon=spec.epsilon, best_alpha=alpha, bound=bound,
                        gap=bound - alpha, g_error=g_error, trace=winner.trace, budget=budget,
                        restarts=restarts, seed=seed, best_restart=winner.index)


def default_search_bath(spec: QuasiCycleSpec, n_rungs: int = 5, scale: int = 3):
    """Exact-geometric bath g = scale r^k for the cycle Hamiltonian, with its layout."""
    H = spec.hamiltonian
    bath = build_bath(H, spec.beta, n_rungs, "exact_geometric", scale=scale)
    return bath, enumerate_blocks(H, bath)


def gibbs_of(spec: QuasiCycleSpec) -> np.ndarray:
    """Gibbs populations of the qutrit."""
    return gibbs_vector(spec.hamiltonian, spec.beta)
