"""
Custom exceptions for the thermal coherence analyses.

Every error carries an HTTP status code for the API and a process exit code
for the command line (2 = invalid input, 1 = infeasible).
"""
from typing import Optional

import numpy as np


class ThermoAnalysisError(Exception):
    """Base exception for all analysis errors."""

    def __init__(self, message: str, status_code: int = 500, exit_code: int = 2):
        self.message = message
        self.status_code = status_code
        self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(ThermoAnalysisError):
    """Raised when input data fails validation."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field:
            message = f"Validation error in '{field}': {message}"
        super().__init__(message, status_code=422)


class StateValidationError(ThermoAnalysisError):
    """Raised when a matrix is not a density matrix."""

    def __init__(self, invariant: str, magnitude: float):
        self.invariant = invariant
        self.magnitude = magnitude
        message = f"Density matrix violates {invariant} (magnitude {magnitude:.3e})"
        super().__init__(message, status_code=422)


class DimensionMismatchError(ThermoAnalysisError):
    """Raised when operands live on systems of different dimension."""

    def __init__(self, expected: int, got: int, what: str = "operand"):
        self.expected = expected
        self.got = got
        message = f"Dimension mismatch for {what}: expected {expected}, got {got}"
        super().__init__(message, status_code=422)


class DomainError(ThermoAnalysisError):
    """Raised when a parameter lies outside the domain of an operation."""

    def __init__(self, message: str):
        super().__init__(message, status_code=422)


class SingularInputError(ThermoAnalysisError):
    """Raised when the input diagonal equals the Gibbs diagonal."""

    def __init__(self, p: float, gibbs_ground: float):
        self.p = p
        self.gibbs_ground = gibbs_ground
        self.gibbs_diagonal = True
        message = (
            f"Input ground population {p} equals the Gibbs value {gibbs_ground}; "
            "the channel is not fixed by populations"
        )
        super().__init__(message, status_code=422)


class InfeasibleTransitionError(ThermoAnalysisError):
    """Raised when a requested transition violates thermo-majorization."""

    def __init__(self, message: str):
        super().__init__(message, status_code=409, exit_code=1)


class NotGibbsStochasticError(ThermoAnalysisError):
    """Raised when a transition matrix is not (Gibbs-)stochastic."""

    def __init__(self, residual: float, reason: str = "Gibbs state not preserved"):
        self.residual = residual
        message = f"Transition matrix invalid: {reason} (residual {residual:.3e})"
        super().__init__(message, status_code=422)


class DMPViolationError(ThermoAnalysisError):
    """Raised when the damping matrix (or Choi matrix) is not positive."""

    def __init__(self, eigenvalue: float, eigenvector: Optional[np.ndarray] = None):
        self.eigenvalue = eigenvalue
        self.eigenvector = eigenvector
        message = f"Damping matrix not positive: witness eigenvalue {eigenvalue:.6e}"
        super().__init__(message, status_code=422, exit_code=1)


class DegenerateBohrSpectrumError(ThermoAnalysisError):
    """Raised when an analysis needs a nondegenerate Bohr spectrum."""

    def __init__(self, energies):
        self.energies = list(energies)
        message = f"Bohr spectrum of energies {self.energies} is degenerate"
        super().__init__(message, status_code=422)


class IncommensurateSpectrumError(ThermoAnalysisError):
    """Raised when system gaps share no common energy quantum."""

    def __init__(self, energies):
        self.energies = list(energies)
        message = f"Energies {self.energies} are not commensurate with a common quantum"
        super().__init__(message, status_code=422)


class BathConstructionError(ThermoAnalysisError):
    """Raised when a bath spectrum cannot be built as requested."""

    def __init__(self, message: str):
        super().__init__(message, status_code=422)


class LayoutTooLargeError(ThermoAnalysisError):
    """Raised when a block layout exceeds the dense dimension cap."""

    def __init__(self, dimension: int, cap: int):
        self.dimension = dimension
        self.cap = cap
        message = f"Layout dimension {dimension} exceeds cap {cap}"
        super().__init__(message, status_code=413)


class NonUnitaryBlockError(ThermoAnalysisError):
    """Raised when a block of a block unitary is not unitary."""

    def __init__(self, block: int, deviation: float):
        self.block = block
        self.deviation = deviation
        message = f"Block {block} is not unitary (deviation {deviation:.3e})"
        super().__init__(message, status_code=422)


class RegimeViolationError(ThermoAnalysisError):
    """Raised when a construction is requested outside its valid regime."""

    def __init__(self, message: str):
        super().__init__(message, status_code=422)


class PreconditionError(ThermoAnalysisError):
    """Raised when an input does not realize the process it is claimed to realize."""

    def __init__(self, message: str, quantity: str | None = None):
        self.quantity = quantity
        super().__init__(message, status_code=422)


class InadmissiblePerturbationError(ThermoAnalysisError):
    """Raised when a perturbation pushes a probability outside [0, 1]."""

    def __init__(self, epsilon: float, eps_max: float):
        self.epsilon = epsilon
        self.eps_max = eps_max
        message = f"Perturbation {epsilon} outside admissible range [0, {eps_max:.6g}]"
        super().__init__(message, status_code=422)
