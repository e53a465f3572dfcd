"""
Dependency injection providers for FastAPI routes.
"""
import threading

from fastapi import Depends

from src.config import config
from src.services.transition_service import TransitionAnalysisService
from src.utils.base_metrics import BaseMetricsExporter
from src.utils.memory_metrics import MemoryMetricsExporter

_metrics_exporter_instance: BaseMetricsExporter | None = None

_metrics_lock = threading.Lock()


def get_metrics_exporter() -> BaseMetricsExporter:
    """Creates singleton of the latency metrics exporter."""
    global _metrics_exporter_instance  # pylint: disable=global-statement

    if _metrics_exporter_instance is None:
        with _metrics_lock:
            if _metrics_exporter_instance is None:
                _metrics_exporter_instance = MemoryMetricsExporter(
                    max_samples=config.metrics.max_samples
                )

    return _metrics_exporter_instance


def get_transition_service(
    metrics_exporter: BaseMetricsExporter = Depends(get_metrics_exporter)
) -> TransitionAnalysisService:
    """Injects the analysis service."""
    return TransitionAnalysisService(metrics_exporter)
