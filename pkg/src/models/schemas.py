"""
Pydantic models for state and channel files and for the analysis reports.
"""
import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from src.exceptions import DimensionMismatchError, ValidationError
from src.thermo.coherence_bounds import DampingFactors, TransitionMatrix
from src.thermo.core import DensityMatrix, Hamiltonian, assert_state
from src.thermo.eto_channels import ETOChannel, build_eto


def _check_finite(rows: List[List[float]], name: str) -> List[List[float]]:
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            if math.isnan(value) or math.isinf(value):
                raise ValidationError(f"non-finite entry at ({i}, {j})", field=name)
    return rows


class ComplexMatrix(BaseModel):
    """Complex matrix split into real and imaginary parts."""
    re: List[List[float]] = Field(..., description="Real part, row-major")
    im: Optional[List[List[float]]] = Field(None, description="Imaginary part; zero if omitted")

    @field_validator("re", "im")
    @classmethod
    def validate_parts(cls, v, info):
        """Rejects ragged or non-finite parts."""
        if v is None:
            return v
        if not v or any(len(row) != len(v[0]) for row in v):
            raise ValidationError("matrix rows must be non-empty and of equal length",
                                  field=info.field_name)
        return _check_finite(v, info.field_name)

    def to_array(self) -> np.ndarray:
        """Complex numpy array."""
        real = np.asarray(self.re, dtype=float)
        if self.im is None:
            return real.astype(complex)
        imag = np.asarray(self.im, dtype=float)
        if imag.shape != real.shape:
            raise DimensionMismatchError(real.shape[0], imag.shape[0], "imaginary part")
        return real + 1j * imag

    @classmethod
    def from_array(cls, matrix) -> "ComplexMatrix":
        """Splits a numpy array; the imaginary part is always written."""
        matrix = np.asarray(matrix, dtype=complex)
        return cls(re=np.real(matrix).tolist(), im=np.imag(matrix).tolist())


class SystemSpec(BaseModel):
    """Energies in ascending order and the inverse temperature."""
    energies: List[float] = Field(..., description="System energies, ascending")
    beta: float = Field(..., description="Inverse temperature, >= 0")

    @field_validator("energies")
    @classmethod
    def validate_energies(cls, v):
        """Energies must be present and finite."""
        if len(v) == 0:
            raise ValidationError("energies list cannot be empty", field="energies")
        if any(math.isnan(e) or math.isinf(e) for e in v):
            raise ValidationError("energies must be finite", field="energies")
        return v

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, v):
        """beta >= 0 and finite."""
        if math.isnan(v) or math.isinf(v) or v < 0:
            raise ValidationError(f"beta must be finite and non-negative, got {v}", field="beta")
        return v

    def hamiltonian(self) -> Hamiltonian:
        """Hamiltonian in the file's level order."""
        return Hamiltonian(tuple(self.energies))


class StateFile(SystemSpec):
    """A density matrix together with its system."""
    rho: ComplexMatrix

    def density(self) -> DensityMatrix:
        """Validated density matrix."""
        state = assert_state(self.rho.to_array())
        if state.dimension != len(self.energies):
            raise DimensionMismatchError(len(self.energies), state.dimension, "state")
        return state


class ChannelFile(SystemSpec):
    """Covariant channel as transition matrix plus damping factors."""
    G: List[List[float]] = Field(..., description="p(i->j), row i = source level")
    alpha: ComplexMatrix

    @field_validator("G")
    @classmethod
    def validate_g(cls, v):
        """Transition matrix entries must be finite."""
        return _check_finite(v, "G")

    def to_channel(self) -> ETOChannel:
        """Validated channel."""
        return build_eto(TransitionMatrix(self.G), DampingFactors(self.alpha.to_array()),
                         self.hamiltonian(), self.beta)

    @classmethod
    def from_channel(cls, channel: ETOChannel) -> "ChannelFile":
        """Serializes a channel, shifted energies included."""
        return cls(energies=list(channel.H.levels), beta=channel.beta.beta,
                   G=channel.G.G.tolist(), alpha=ComplexMatrix.from_array(channel.A.alpha))


class TransitionRequest(SystemSpec):
    """Request model for the transition feasibility check."""
    rho: ComplexMatrix
    sigma: ComplexMatrix
    mode: Literal["to", "eto"] = Field("to", description="Thermal or enhanced thermal operations")

    def states(self) -> Tuple[DensityMatrix, DensityMatrix]:
        """Validated input and target states."""
        rho, sigma = assert_state(self.rho.to_array()), assert_state(self.sigma.to_array())
        for state in (rho, sigma):
            if state.dimension != len(self.energies):
                raise DimensionMismatchError(len(self.energies), state.dimension, "state")
        return rho, sigma

    @classmethod
    def from_files(cls, state: StateFile, target: StateFile,
                   mode: str = "to") -> "TransitionRequest":
        """Combines two state files that describe the same system."""
        if state.energies != target.energies or state.beta != target.beta:
            raise ValidationError("state and target describe different systems", field="target")
        return cls(energies=state.energies, beta=state.beta, rho=state.rho, sigma=target.rho,
                   mode=mode)


class FeasibilityReport(BaseModel):
    """Verdict of a transition check."""
    feasible: Optional[bool] = Field(..., description="None when undecided")
    case: Optional[str] = Field(None, description="Qubit beta-order case a|b|c|d")
    kappa: Optional[float] = None
    bound_matrix: Optional[List[List[float]]] = Field(
        None, description="sqrt(p(i->i) p(j->j)) limits on |alpha_ij|")
    sufficiency: str
    verdict: Literal["feasible", "infeasible", "undecided"]
    mode: str
    dimension: int
    diagonal_feasible: bool
    gibbs_diagonal: bool = False
    dmp_margin: Optional[float] = None
    notes: List[str] = Field(default_factory=list)


class KappaRequest(BaseModel):
    """Request model for the qubit damping bound."""
    p: float = Field(..., description="Ground population of the input")
    q: float = Field(..., description="Ground population of the target")
    beta: float
    energy_gap: float = Field(1.0, gt=0)


class KappaReport(BaseModel):
    """Optimal qubit damping factor and the transition matrix that fixes it."""
    p: float
    q: float
    beta: float
    energy_gap: float
    case: str
    kappa: float
    gibbs_diagonal: bool
    G: Optional[List[List[float]]] = None


class CurveRequest(BaseModel):
    """Request model for a thermo-majorization curve."""
    populations: List[float]
    energies: List[float]
    beta: float


class CurveResponse(BaseModel):
    """Curve breakpoints and the beta order that produced them."""
    xs: List[float]
    ys: List[float]
    Z: float
    beta_order: List[int]


class ChannelApplyRequest(BaseModel):
    """Request model for applying a channel to a state."""
    channel: ChannelFile
    rho: ComplexMatrix


class ChannelApplyResponse(BaseModel):
    """Output state plus the channel's self-checks."""
    sigma: ComplexMatrix
    gibbs_fixed_point_error: float
    covariant: bool
    kraus_rank: int


class SimulationReport(BaseModel):
    """One bath size of the finite-bath staircase."""
    n_rungs: int
    boundary_mass: float
    G_measured: List[List[float]]
    alpha_measured: float
    kappa_analytic: float
    gap: float
    alpha_interior: float
    rounding_error: float
    boundary_treatment: str = "identity on boundary blocks"


class SimulationSeries(BaseModel):
    """Staircase convergence over several bath sizes."""
    p: float
    q: float
    beta: float
    energy_gap: float
    seed_kind: str
    rows: List[SimulationReport]


class QuasicycleRequest(BaseModel):
    """Request model for the quasi-cycle analyses."""
    e21: float = Field(..., gt=0, description="E2 - E1")
    e20: float = Field(..., gt=0, description="E2 - E0")
    beta: float = Field(..., gt=0)
    epsilon: float = Field(0.0, ge=0)
    rungs: int = Field(5, ge=4)
    scale: int = Field(3, ge=1)
    nogo: bool = Field(False, description="Run the no-go check on the brute-force cycle unitary")
    search: bool = False
    budget: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None
    restarts: Optional[int] = Field(None, ge=1)


class NoGoSummary(BaseModel):
    """Serialized no-go report."""
    saturation_possible: bool
    zero_block_max: float
    singular_values_binary: bool
    singular_value_deviation: float
    gap: float
    witness_rung: int
    unit_counts: Tuple[int, int]
    alpha: float
    bound: float


class ConjectureSearchReport(BaseModel):
    """Serialized search outcome; always labelled as numerical evidence."""
    status: str
    epsilon: float
    best_alpha: Optional[float]
    bound: float
    gap: Optional[float]
    g_error: Optional[float]
    trace: List[Tuple[int, float]]
    budget: int
    restarts: int
    seed: int
    best_restart: Optional[int]
    note: str


class QuasicycleReport(BaseModel):
    """Transition matrix of the (perturbed) cycle and the optional structural analyses."""
    epsilon: float
    eps_max: float
    slope: float
    G: List[List[float]] = Field(..., description="(0, 1, 2) order")
    G_descending: List[List[float]] = Field(..., description="(2, 1, 0) order")
    oracle_residual: float
    nogo: Optional[NoGoSummary] = None
    search: Optional[ConjectureSearchReport] = None


class OracleSearchReport(BaseModel):
    """Haar-random thermal operations checked against the necessary conditions."""
    samples: int
    seed: int
    n_rungs: int
    worst_minor_ratio: float
    min_dmp_eigenvalue: float
    violations: int


# Health Check API Models
class Metrics(BaseModel):
    """Metrics for performance monitoring."""
    avg: float | None = None
    p95: float | None = None


class HealthCheckResponse(BaseModel):
    """Response model for health check endpoint."""
    status: str = Field(..., description="Service status")
    latency_ms: Dict[str, Metrics] = Field(..., description="Latency metrics per analysis kind")
