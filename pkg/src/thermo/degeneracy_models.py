"""
Bath degeneracy profiles g(k quantum) for the finite bath simulator.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import comb

from src.exceptions import BathConstructionError


@dataclass(frozen=True)
class DegeneracyProfile:
    """Integer degeneracies over the rung window and how well they fit the Gibbs ratio."""
    degeneracies: tuple[int, ...]
    delta: float
    tail_mass: float = 0.0
    first_rung: int = 0


class DegeneracyModel(ABC):
    """Interface for the bath degeneracy families."""

    def __init__(self, ratio: float):
        if not np.isfinite(ratio) or ratio < 1.0:
            raise BathConstructionError(f"Boltzmann ratio e^(beta eps) must be >= 1, got {ratio}")
        self.ratio = float(ratio)

    @abstractmethod
    def profile(self, n_rungs: int) -> DegeneracyProfile:
        """Degeneracies of the first ``n_rungs`` used rungs."""

    @abstractmethod
    def get_model_type(self) -> str:
        """Registry key of the model."""

    def measure_delta(self, degeneracies) -> float:
        """max_k |g(k) / (r g(k-1)) - 1| over consecutive rungs."""
        g = np.asarray(degeneracies, dtype=float)
        if g.size < 2:
            return 0.0
        return float(np.max(np.abs(g[1:] / (self.ratio * g[:-1]) - 1.0)))


class ExactGeometricModel(DegeneracyModel):
    """g(k) = scale * r^k with integer r = e^(beta eps), so the Gibbs ratio holds exactly."""

    def __init__(self, ratio: float, scale: int = 1, tol: float = 1e-9, **_):
        super().__init__(ratio)
        rounded = int(round(ratio))
        if rounded < 1 or abs(ratio - rounded) > tol * max(1.0, ratio):
            raise BathConstructionError(
                f"exact_geometric mode needs an integer e^(beta eps), got {ratio:.12g}")
        if int(scale) < 1:
            raise BathConstructionError(f"bath scale must be a positive integer, got {scale}")
        self.base = rounded
        self.scale = int(scale)

    def profile(self, n_rungs: int) -> DegeneracyProfile:
        degeneracies = tuple(self.scale * self.base ** k for k in range(n_rungs))
        return DegeneracyProfile(degeneracies=degeneracies, delta=0.0)

    def get_model_type(self) -> str:
        return "exact_geometric"


class MultinomialModel(DegeneracyModel):
    """
    n two-level copies with gap eps: g(k) = C(n, k).

    The window of rungs is centred on the thermal occupation n / (1 + r) and
    kept below n/2 so that g stays non-decreasing. The Gibbs weight outside
    the window is reported as ``tail_mass``.
    """

    def __init__(self, ratio: float, copies: Optional[int] = None, **_):
        super().__init__(ratio)
        self.copies = copies

    def profile(self, n_rungs: int) -> DegeneracyProfile:
        copies = self.copies if self.copies is not None else 2 * n_rungs + 2
        ceiling = copies // 2
        if ceiling < n_rungs - 1:
            raise BathConstructionError(
                f"{copies} copies cannot hold {n_rungs} non-decreasing rungs")

        centre = int(round(copies / (1.0 + self.ratio)))
        first = int(np.clip(centre - n_rungs // 2, 0, ceiling - (n_rungs - 1)))
        ks = range(first, first + n_rungs)
        degeneracies = tuple(int(comb(copies, k, exact=True)) for k in ks)

        # Gibbs distribution of k excitations among the copies
        occupation = 1.0 / (1.0 + self.ratio)
        window_mass = sum(comb(copies, k) * occupation ** k * (1 - occupation) ** (copies - k)
                          for k in ks)
        return DegeneracyProfile(
            degeneracies=degeneracies,
            delta=self.measure_delta(degeneracies),
            tail_mass=float(max(0.0, 1.0 - window_mass)),
            first_rung=first,
        )

    def get_model_type(self) -> str:
        return "multinomial"


class DegeneracyModelFactory:  # pylint: disable=too-few-public-methods
    """Creates degeneracy models based on the configured bath mode."""

    _registry = {
        "exact_geometric": ExactGeometricModel,
        "multinomial": MultinomialModel,
    }

    @classmethod
    def create(cls, mode: str, **kwargs) -> DegeneracyModel:
        """Instantiates the model with its specific parameters."""
        if mode not in cls._registry:
            raise BathConstructionError(f"Bath mode {mode} not supported")

        model_class = cls._registry[mode]
        return model_class(**kwargs)
