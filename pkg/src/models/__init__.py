"""
Models package for state files, channel files and analysis reports.
"""
from .schemas import (
    ChannelFile,
    ComplexMatrix,
    FeasibilityReport,
    HealthCheckResponse,
    Metrics,
    StateFile,
    TransitionRequest
)

__all__ = [
    "ChannelFile",
    "ComplexMatrix",
    "FeasibilityReport",
    "HealthCheckResponse",
    "Metrics",
    "StateFile",
    "TransitionRequest"
]
