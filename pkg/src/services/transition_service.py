"""
Service layer shared by the command line and the HTTP API.
"""
import time
from contextlib import contextmanager
from typing import Sequence

import numpy as np

from src.config import config
from src.exceptions import InfeasibleTransitionError, SingularInputError
from src.models.schemas import (
    ChannelApplyRequest, ChannelApplyResponse, ChannelFile, ComplexMatrix,
    ConjectureSearchReport, CurveRequest, CurveResponse, FeasibilityReport, KappaReport,
    KappaRequest, NoGoSummary, OracleSearchReport, QuasicycleReport, QuasicycleRequest,
    SimulationReport, SimulationSeries, TransitionRequest
)
from src.thermo.coherence_bounds import (
    dmp_check, dmp_feasible, minor_bound, qubit_full_feasible, qubit_kappa,
    qubit_transition_probs, TransitionMatrix
)
from src.thermo.core import Hamiltonian, assert_state
from src.thermo.eto_channels import (
    apply, compose, gibbs_fixed_point_error, kraus_decomposition, verify_covariance
)
from src.thermo.finite_bath_sim import (
    build_bath, enumerate_blocks, random_to_channel, simulate_convergence
)
from src.thermo.quasicycle import (
    FORBIDDEN, QuasiCycleSpec, admissible_epsilon, brute_quasicycle_unitary, conjecture_search,
    default_search_bath, descending_view, gibbs_of, nogo_check, perturbation_slope,
    perturbed_probs, solve_transition_constraints
)
from src.thermo.thermo_majorization import (
    beta_order, build_curve, diagonal_feasible, qubit_diagonal_feasible
)
from src.utils.base_metrics import BaseMetricsExporter
from src.utils.logger import logger

EXIT_CODES = {"feasible": 0, "infeasible": 1, "undecided": 3}

QUBIT_SUFFICIENCY = "exact: necessary and sufficient for qubit thermal operations"
ETO_SUFFICIENCY = "exact for enhanced thermal operations"
TO_CAVEAT = ("necessary only: thermo-majorization and damping-matrix positivity hold, "
             "but they are not known to be sufficient for thermal operations when d > 2")


class TransitionAnalysisService:
    """Runs the analyses and records their latency."""

    def __init__(self, metrics_exporter: BaseMetricsExporter):
        self.metrics_exporter = metrics_exporter

    @contextmanager
    def _timed(self, analysis: str):
        start_time = time.time()
        logger.info("Starting %s", analysis)
        try:
            yield
        finally:
            latency_ms = (time.time() - start_time) * 1000
            self.metrics_exporter.record_latency(analysis, latency_ms)
            logger.info("Finished %s in %.1f ms", analysis, latency_ms)

    def check_transition(self, request: TransitionRequest) -> FeasibilityReport:
        """Exact verdict for qubits, necessary conditions plus caveat for d > 2."""
        with self._timed("check_transition"):
            rho, sigma = request.states()
            H = request.hamiltonian()
            if H.dimension == 2:
                return self._check_qubit(rho, sigma, H, request)
            return self._check_general(rho, sigma, H, request)

    def _check_qubit(self, rho, sigma, H: Hamiltonian, request: TransitionRequest):
        verdict = qubit_full_feasible(rho, sigma, H, request.beta)
        bound = None
        if verdict.diagonal_feasible and not verdict.gibbs_diagonal:
            G = qubit_transition_probs(_ground_population(rho), _ground_population(sigma),
                                       request.beta, H.levels[1])
            bound = minor_bound(G).tolist()
        return FeasibilityReport(
            feasible=verdict.feasible,
            case=verdict.case,
            kappa=verdict.kappa,
            bound_matrix=bound,
            sufficiency=QUBIT_SUFFICIENCY,
            verdict="feasible" if verdict.feasible else "infeasible",
            mode=request.mode,
            dimension=2,
            diagonal_feasible=verdict.diagonal_feasible,
            gibbs_diagonal=verdict.gibbs_diagonal,
        )

    def _check_general(self, rho, sigma, H: Hamiltonian, request: TransitionRequest):
        d = H.dimension
        base = {"mode": request.mode, "dimension": d}
        if np.max(np.abs(rho.matrix - sigma.matrix)) <= config.tolerances.coh:
            return FeasibilityReport(
                feasible=True, bound_matrix=np.ones((d, d)).tolist(),
                sufficiency="exact: the identity is a thermal operation", verdict="feasible",
                diagonal_feasible=True, **base)
        if not diagonal_feasible(rho.populations, sigma.populations, H, request.beta):
            return FeasibilityReport(feasible=False, sufficiency="thermo-majorization fails",
                                     verdict="infeasible", diagonal_feasible=False, **base)

        off_diagonal = sigma.matrix - np.diag(np.diag(sigma.matrix))
        if np.max(np.abs(off_diagonal), initial=0.0) <= 1e-12:
            return FeasibilityReport(
                feasible=True, sufficiency="exact: incoherent targets need only thermo-majorization",
                verdict="feasible", diagonal_feasible=True, **base)

        result = dmp_feasible(rho, sigma, H, request.beta)
        bound = minor_bound(TransitionMatrix(result.G)).tolist() if result.G is not None else None
        if not result.feasible:
            return FeasibilityReport(
                feasible=False, bound_matrix=bound, sufficiency="damping-matrix positivity fails",
                verdict="infeasible", diagonal_feasible=True, dmp_margin=result.margin,
                notes=[f"solver status: {result.status}"], **base)
        notes = [f"free damping factors: {list(result.free_pairs)}"] if result.free_pairs else []
        if request.mode == "eto":
            return FeasibilityReport(
                feasible=True, bound_matrix=bound, sufficiency=ETO_SUFFICIENCY,
                verdict="feasible", diagonal_feasible=True, dmp_margin=result.margin, notes=notes,
                **base)
        return FeasibilityReport(
            feasible=None, bound_matrix=bound, sufficiency=TO_CAVEAT, verdict="undecided",
            diagonal_feasible=True, dmp_margin=result.margin, notes=notes, **base)

    def kappa(self, request: KappaRequest) -> KappaReport:
        """Qubit damping bound for ground populations p -> q."""
        with self._timed("kappa"):
            H = Hamiltonian((0.0, request.energy_gap))
            diag = qubit_diagonal_feasible(request.p, request.q, H, request.beta)
            if not diag.feasible:
                raise InfeasibleTransitionError(
                    f"populations {request.p} -> {request.q} violate thermo-majorization "
                    f"(case {diag.case})")
            fields = request.model_dump()
            try:
                value = qubit_kappa(request.p, request.q, request.beta, request.energy_gap)
                G = qubit_transition_probs(request.p, request.q, request.beta,
                                           request.energy_gap)
            except SingularInputError:
                return KappaReport(case=diag.case, kappa=1.0, gibbs_diagonal=True, **fields)
            return KappaReport(case=diag.case, kappa=value, gibbs_diagonal=False,
                               G=G.G.tolist(), **fields)

    def curve(self, request: CurveRequest) -> CurveResponse:
        """Thermo-majorization curve of a population vector."""
        with self._timed("curve"):
            H = Hamiltonian(tuple(request.energies))
            spectrum = beta_order(request.populations, H, request.beta)
            curve = build_curve(spectrum)
            return CurveResponse(xs=list(curve.xs), ys=list(curve.ys), Z=curve.Z,
                                 beta_order=list(spectrum.permutation))

    def apply_channel(self, request: ChannelApplyRequest) -> ChannelApplyResponse:
        """Builds the channel, applies it and reports its self-checks."""
        with self._timed("apply_channel"):
            channel = request.channel.to_channel()
            state = apply(channel, _state(request.rho))
            return ChannelApplyResponse(
                sigma=ComplexMatrix.from_array(state.matrix),
                gibbs_fixed_point_error=gibbs_fixed_point_error(channel),
                covariant=verify_covariance(channel).covariant,
                kraus_rank=len(kraus_decomposition(channel)),
            )

    def build_channel(self, channel_file: ChannelFile) -> ChannelFile:
        """Validates a channel file and returns it normalized."""
        with self._timed("build_channel"):
            return ChannelFile.from_channel(channel_file.to_channel())

    def compose_channels(self, first: ChannelFile, second: ChannelFile) -> ChannelFile:
        """``first`` then ``second``."""
        with self._timed("compose_channels"):
            return ChannelFile.from_channel(compose(first.to_channel(), second.to_channel()))

    def simulate_bath(self, p: float, q: float, beta: float, energy_gap: float,
                      rungs: Sequence[int], seed_kind: str = "binary") -> SimulationSeries:
        """Staircase realization of the optimal qubit channel at several bath sizes."""
        with self._timed("simulate_bath"):
            H = Hamiltonian((0.0, energy_gap))
            rows = simulate_convergence(p, q, H, beta, rungs, seed_kind=seed_kind)
            return SimulationSeries(
                p=p, q=q, beta=beta, energy_gap=energy_gap, seed_kind=seed_kind,
                rows=[SimulationReport(**row.__dict__) for row in rows])

    def quasicycle(self, request: QuasicycleRequest) -> QuasicycleReport:
        """Cycle probabilities, the independent oracle and the optional structure analyses."""
        with self._timed("quasicycle"):
            spec = QuasiCycleSpec(dE21=request.e21, dE20=request.e20, beta=request.beta,
                                  epsilon=request.epsilon)
            G = perturbed_probs(spec)
            fixed = {pair: request.epsilon for pair in FORBIDDEN}
            oracle = solve_transition_constraints(gibbs_of(spec), fixed)
            report = QuasicycleReport(
                epsilon=request.epsilon,
                eps_max=admissible_epsilon(spec),
                slope=perturbation_slope(spec),
                G=G.G.tolist(),
                G_descending=descending_view(G).tolist(),
                oracle_residual=float(np.max(np.abs(oracle.G - G.G))),
            )
            if not (request.nogo or request.search):
                return report
            bath, layout = default_search_bath(spec, request.rungs, request.scale)
            if request.nogo:
                nogo = nogo_check(brute_quasicycle_unitary(layout), layout, bath, spec)
                report.nogo = NoGoSummary(**nogo.__dict__)
            if request.search:
                result = conjecture_search(spec, layout, bath, budget=request.budget,
                                           seed=request.seed, restarts=request.restarts)
                report.search = ConjectureSearchReport(**result.__dict__)
            return report

    def search_oracle(self, samples: int, seed: int, n_rungs: int, beta: float,
                      energy_gap: float = 1.0) -> OracleSearchReport:
        """Haar-random thermal operations on a qubit bath, checked against the minor bound."""
        with self._timed("search_oracle"):
            H = Hamiltonian((0.0, energy_gap))
            bath = build_bath(H, beta, n_rungs)
            layout = enumerate_blocks(H, bath)
            worst_ratio, min_eig, violations = 0.0, np.inf, 0
            for offset in range(samples):
                channel = random_to_channel(layout, bath, seed + offset)
                bounds = minor_bound(TransitionMatrix(channel.G))
                ratios = _minor_ratios(channel.alpha, bounds)
                worst_ratio = max(worst_ratio, ratios)
                M = channel.alpha.copy()
                np.fill_diagonal(M, np.diag(channel.G))
                verdict = dmp_check(0.5 * (M + M.conj().T))
                min_eig = min(min_eig, verdict.min_eigenvalue)
                violations += int(not verdict.satisfied or ratios > 1.0 + 1e-9)
            return OracleSearchReport(samples=samples, seed=seed, n_rungs=n_rungs,
                                      worst_minor_ratio=worst_ratio,
                                      min_dmp_eigenvalue=float(min_eig), violations=violations)

    @staticmethod
    def exit_code(report: FeasibilityReport) -> int:
        """Process exit status of a verdict."""
        return EXIT_CODES[report.verdict]


def _ground_population(state) -> float:
    """Ground population of a qubit state."""
    return float(state.populations[0])


def _state(matrix: ComplexMatrix):
    return assert_state(matrix.to_array())


def _minor_ratios(alpha: np.ndarray, bounds: np.ndarray) -> float:
    """max_{i != j} |alpha_ij| / sqrt(p(i->i) p(j->j)); zero bounds count only if alpha is nonzero."""
    d = alpha.shape[0]
    worst = 0.0
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            if bounds[i, j] > 1e-12:
                worst = max(worst, abs(alpha[i, j]) / bounds[i, j])
            elif abs(alpha[i, j]) > 1e-9:
                worst = np.inf
    return float(worst)
