"""
Utilities package: logging and latency metrics.

Import the metrics exporters from their modules; they depend on the
report schemas, which in turn depend on the analysis packages.
"""
from src.utils.logger import logger

__all__ = ["logger"]
