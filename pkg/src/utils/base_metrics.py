"""
Base interface for latency metrics exporters.
"""
from abc import ABC, abstractmethod
from typing import Dict

from src.models.schemas import Metrics


class BaseMetricsExporter(ABC):
    """Interface for recording and exporting per-analysis latencies."""

    @abstractmethod
    def record_latency(self, analysis: str, latency_ms: float):
        """Records the latency of one analysis run."""

    @abstractmethod
    def get_metrics(self, analysis: str) -> Metrics:
        """Returns aggregated latency metrics for one analysis kind."""

    @abstractmethod
    def get_all_metrics(self) -> Dict[str, Metrics]:
        """Returns aggregated metrics for every analysis kind seen so far."""

    @abstractmethod
    def export(self) -> str:
        """Exports metrics as JSON."""

    @abstractmethod
    def reset(self):
        """Clears recorded metrics."""
