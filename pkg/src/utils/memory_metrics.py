"""
In-memory latency metrics.
"""
import json
import threading
from collections import defaultdict, deque
from typing import Dict

import numpy as np

from src.models.schemas import Metrics
from src.utils.base_metrics import BaseMetricsExporter


class MemoryMetricsExporter(BaseMetricsExporter):
    """Store and export latencies in memory, one bounded deque per analysis kind."""

    def __init__(self, max_samples: int = 10000):
        self._latencies: Dict[str, deque] = defaultdict(lambda: deque(maxlen=max_samples))
        self._lock = threading.Lock()

    def record_latency(self, analysis: str, latency_ms: float):
        with self._lock:
            self._latencies[analysis].append(latency_ms)

    def get_metrics(self, analysis: str) -> Metrics:
        with self._lock:
            samples = self._latencies.get(analysis)
            if not samples:
                return Metrics(avg=None, p95=None)
            snapshot = list(samples)

        return Metrics(
            avg=float(np.mean(snapshot)),
            p95=float(np.percentile(snapshot, 95))
        )

    def get_all_metrics(self) -> Dict[str, Metrics]:
        with self._lock:
            kinds = sorted(self._latencies)
        return {kind: self.get_metrics(kind) for kind in kinds}

    def export(self) -> str:
        """Exports metrics in JSON format."""
        return json.dumps({
            kind: {"avg_latency_ms": m.avg, "p95_latency_ms": m.p95}
            for kind, m in self.get_all_metrics().items()
        }, indent=2)

    def reset(self):
        with self._lock:
            self._latencies.clear()
