"""Sampling densities for the simulation experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import PolynomialKernel
from .rng import RandomState

__all__ = [
    "BetaDensity",
    "EpanechnikovDensity",
    "MixtureDensity",
    "two_cluster_density",
]


@dataclass(frozen=True)
class BetaDensity:
    """Beta(a, b) on (0, 1), sampled through the two-Gamma ratio."""

    a: float
    b: float

    def sample(self, rng: RandomState, size: int) -> np.ndarray:
        return rng.beta(self.a, self.b, size)

    def __str__(self) -> str:
        return f"beta({self.a:g},{self.b:g})"


@dataclass(frozen=True)
class EpanechnikovDensity:
    """The Epanechnikov bump as a sampling density, location-scale shifted."""

    loc: float = 0.0
    scale: float = 1.0

    def sample(self, rng: RandomState, size: int) -> np.ndarray:
        draws = PolynomialKernel(1.0).sample(rng, size)
        return self.loc + self.scale * np.asarray(draws)

    def __str__(self) -> str:
        return f"epanechnikov(loc={self.loc:g},scale={self.scale:g})"


@dataclass(frozen=True)
class MixtureDensity:
    components: tuple
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.components) != len(self.weights) or not self.components:
            raise ValueError("components and weights must be nonempty and equal length")
        total = float(sum(self.weights))
        object.__setattr__(self, "weights", tuple(float(w) / total for w in self.weights))

    def sample(self, rng: RandomState, size: int) -> np.ndarray:
        cum = np.cumsum(self.weights)
        picks = np.searchsorted(cum, rng.uniform(size=size), side="right")
        out = np.empty(size)
        for k, comp in enumerate(self.components):
            mask = picks == k
            m = int(mask.sum())
            if m:
                out[mask] = comp.sample(rng, m)
        return out

    def __str__(self) -> str:
        parts = ", ".join(f"{w:g}*{c}" for w, c in zip(self.weights, self.components))
        return f"mixture({parts})"


def two_cluster_density(separation: float = 10.0) -> MixtureDensity:
    """Equal-weight pair of unit Epanechnikov bumps this far apart."""
    return MixtureDensity(
        components=(EpanechnikovDensity(0.0, 1.0), EpanechnikovDensity(separation, 1.0)),
        weights=(0.5, 0.5),
    )
