"""
Centralized configuration of numerical tolerances, bath sizing and search defaults.
"""
from pydantic import BaseModel
from pydantic_settings import BaseSettings


class ToleranceConfig(BaseModel):
    """Absolute tolerances used by state, channel and curve checks."""
    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    curve: float = 1e-9
    sing: float = 1e-9
    coh: float = 1e-9
    unitary: float = 1e-10
    sv: float = 1e-8
    realize: float = 1e-6
    bohr_gap: float = 1e-9
    sdp: float = 1e-6


class BathConfig(BaseModel):
    """Config for finite bath construction."""
    max_dimension: int = 2 ** 14
    default_rungs: int = 6
    mode: str = "exact_geometric"
    max_workers: int = 4


class SearchConfig(BaseModel):
    """Config for the seeded coherence search."""
    budget: int = 10000
    restarts: int = 4
    step: float = 0.25
    trace_every: int = 50
    seed: int = 0


class MetricsConfig(BaseModel):
    """Config for in-memory latency metrics."""
    max_samples: int = 10000


class AppConfig(BaseSettings):
    """Application settings."""

    tolerances: ToleranceConfig = ToleranceConfig()
    bath: BathConfig = BathConfig()
    search: SearchConfig = SearchConfig()
    metrics: MetricsConfig = MetricsConfig()

    class Config:  # pylint: disable=too-few-public-methods
        """Pydantic configuration."""
        env_prefix = "THERMO_"
        case_sensitive = False
        env_nested_delimiter = "__"


# Global instance
config = AppConfig()
