"""
Logging for the analyses.

Reports go to stdout, so records are written to stderr.
"""
import logging
import os
import sys
from typing import Optional

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(funcName)s:%(lineno)d | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
SOLVER_LOGGER_NAME = "__cvxpy__"


def _level(level: Optional[str]) -> int:
    name = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    return getattr(logging, name, logging.INFO)


def setup_logger(name: str = "thermal_coherence", level: Optional[str] = None) -> logging.Logger:
    """
    Logger with the pipe-separated format on stderr.

    ``level`` falls back to LOG_LEVEL, then INFO. The handler is attached once.
    """
    log_instance = logging.getLogger(name)
    log_instance.setLevel(_level(level))
    if not log_instance.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
        log_instance.addHandler(handler)
        log_instance.propagate = False
    return log_instance


def set_level(level: str) -> None:
    """Sets the project level; the solver logger never drops below WARNING."""
    numeric = _level(level)
    logger.setLevel(numeric)
    logging.getLogger(SOLVER_LOGGER_NAME).setLevel(max(numeric, logging.WARNING))


logger = setup_logger()
