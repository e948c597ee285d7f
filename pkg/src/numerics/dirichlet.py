from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class DirichletPrior:
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64).ravel()
        if alpha.size == 0 or np.any(~np.isfinite(alpha)) or np.any(alpha <= 0):
            raise ConfigurationError(f"Dirichlet concentrations must be finite and > 0, got {alpha.tolist()}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def symmetric(cls, n_events: int, concentration: float = 1.0) -> "DirichletPrior":
        return cls(np.full(n_events, concentration))

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "DirichletPrior":
        return cls(np.asarray(values, dtype=np.float64))

    @property
    def n_events(self) -> int:
        return self.alpha.size


def sample_dirichlet(prior: DirichletPrior, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Draw theta (or `size` rows of theta) by normalizing independent Gamma(alpha_t, 1) draws"""
    return rng.dirichlet(prior.alpha, size=size)
