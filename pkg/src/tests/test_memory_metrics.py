"""
Unit tests for the in-memory latency exporter.
"""
import json

from src.utils.memory_metrics import MemoryMetricsExporter


class TestMemoryMetricsExporter:
    """Tests for latency aggregation."""

    def test_empty(self):
        """Unknown analyses have no statistics."""
        exporter = MemoryMetricsExporter()
        metrics = exporter.get_metrics("kappa")
        assert metrics.avg is None
        assert metrics.p95 is None
        assert exporter.get_all_metrics() == {}

    def test_average_and_percentile(self):
        """Mean and 95th percentile per analysis."""
        exporter = MemoryMetricsExporter()
        for latency in range(1, 101):
            exporter.record_latency("curve", float(latency))
        metrics = exporter.get_metrics("curve")
        assert metrics.avg == 50.5
        assert 95.0 <= metrics.p95 <= 96.0

    def test_bounded_window(self):
        """Only the latest samples are kept."""
        exporter = MemoryMetricsExporter(max_samples=2)
        for latency in (100.0, 1.0, 3.0):
            exporter.record_latency("kappa", latency)
        assert exporter.get_metrics("kappa").avg == 2.0

    def test_export_and_reset(self):
        """JSON export lists every analysis; reset clears them."""
        exporter = MemoryMetricsExporter()
        exporter.record_latency("kappa", 2.0)
        exporter.record_latency("curve", 4.0)
        exported = json.loads(exporter.export())
        assert sorted(exported) == ["curve", "kappa"]
        assert exported["kappa"]["avg_latency_ms"] == 2.0
        exporter.reset()
        assert exporter.get_all_metrics() == {}
