"""Estimator-style facades over the analysis pipelines.

These follow scikit-learn conventions (constructor parameters stored
as-is, ``fit(X)`` returning self, fitted attributes suffixed with an
underscore, ``get_params``/``set_params``), so the analyses compose with
pipelines and parameter searches.  The functional layer underneath stays
the primary API for scripted use.
"""

from __future__ import annotations

import numpy as np

from .base import ParamsMixin
from .critical import critical_bandwidth
from .density import DensityEstimate, Sample
from .kernels import Kernel, parse_kernel
from .modecount import CountMethod, Exact, Grid, count_modes
from .rng import RandomState
from .silverman import BootstrapConfig, silverman_test
from .validation import check_data_1d, check_positive

__all__ = ["KernelDensity", "ModeCounter", "CriticalBandwidth", "UnimodalityTest"]


def _resolve_kernel(kernel) -> Kernel:
    if isinstance(kernel, Kernel):
        return kernel
    return parse_kernel(str(kernel))


def _resolve_method(method, points_per_unit_bandwidth: int) -> CountMethod:
    if isinstance(method, (Exact, Grid)):
        return method
    if method == "exact":
        return Exact()
    if method == "grid":
        return Grid(points_per_unit_bandwidth)
    raise ValueError(f"method must be 'exact', 'grid' or a CountMethod, got {method!r}")


class KernelDensity(ParamsMixin):
    """Kernel density estimate with a fixed kernel and bandwidth.

    Parameters
    ----------
    kernel : str or Kernel
        Kernel name (``epan``, ``biweight``, ``triweight``,
        ``multiweight:<theta>``, ``gaussian:<scale>``) or instance.
    bandwidth : float
        Positive smoothing bandwidth.
    """

    def __init__(self, kernel="biweight", bandwidth: float = 1.0):
        self.kernel = kernel
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        check_positive(self.bandwidth, "bandwidth")
        sample = Sample(check_data_1d(X))
        self.estimate_ = DensityEstimate(sample, _resolve_kernel(self.kernel), float(self.bandwidth))
        return self

    def evaluate(self, X, order: int = 0):
        return self._check_fitted("estimate_").evaluate(np.asarray(X, dtype=float), order)

    def score_samples(self, X):
        """Log density, matching the sklearn KernelDensity convention."""
        dens = self.evaluate(X)
        with np.errstate(divide="ignore"):
            return np.log(dens)

    def sample(self, n_samples: int = 1, seed: int = 0):
        est = self._check_fitted("estimate_")
        rng = RandomState(seed)
        idx = rng.integers(0, est.sample.n, size=n_samples)
        eps = np.asarray(est.kernel.sample(rng, size=n_samples))
        return est.sample.points[idx] + est.bandwidth * eps


class ModeCounter(ParamsMixin):
    """Counts and locates the modes of the estimate fitted to the data."""

    def __init__(self, kernel="biweight", bandwidth: float = 1.0, method="exact",
                 points_per_unit_bandwidth: int = 1024):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.method = method
        self.points_per_unit_bandwidth = points_per_unit_bandwidth

    def fit(self, X, y=None):
        est = DensityEstimate(
            Sample(check_data_1d(X)), _resolve_kernel(self.kernel), float(self.bandwidth)
        )
        ms = count_modes(est, _resolve_method(self.method, self.points_per_unit_bandwidth))
        self.mode_set_ = ms
        self.n_modes_ = ms.count
        self.locations_ = ms.locations
        self.heights_ = ms.heights
        return self

    def predict(self, X=None) -> int:
        """The fitted mode count (X accepted for pipeline compatibility)."""
        return self._check_fitted("n_modes_")


class CriticalBandwidth(ParamsMixin):
    """Critical and nonmonotonicity bandwidths of the fitted sample."""

    def __init__(self, kernel="biweight", method="grid", points_per_unit_bandwidth: int = 256,
                 grid_density: int = 64, full_profile: bool = True):
        self.kernel = kernel
        self.method = method
        self.points_per_unit_bandwidth = points_per_unit_bandwidth
        self.grid_density = grid_density
        self.full_profile = full_profile

    def fit(self, X, y=None):
        result = critical_bandwidth(
            Sample(check_data_1d(X)),
            _resolve_kernel(self.kernel),
            _resolve_method(self.method, self.points_per_unit_bandwidth),
            self.grid_density,
            full_profile=self.full_profile,
        )
        self.result_ = result
        self.h_crit_ = result.h_crit
        self.h_nonm_ = result.h_nonm
        self.ratio_ = result.ratio
        return self


class UnimodalityTest(ParamsMixin):
    """Bootstrap bandwidth test for unimodality, fit-style."""

    def __init__(self, kernel="biweight", n_resamples: int = 200, alpha: float = 0.05,
                 seed: int = 0, method="grid", points_per_unit_bandwidth: int = 128,
                 grid_density: int = 64, threads: int = 1):
        self.kernel = kernel
        self.n_resamples = n_resamples
        self.alpha = alpha
        self.seed = seed
        self.method = method
        self.points_per_unit_bandwidth = points_per_unit_bandwidth
        self.grid_density = grid_density
        self.threads = threads

    def fit(self, X, y=None):
        config = BootstrapConfig(
            n_resamples=self.n_resamples,
            alpha=self.alpha,
            seed=self.seed,
            method=_resolve_method(self.method, self.points_per_unit_bandwidth),
            grid_density=self.grid_density,
        )
        result = silverman_test(
            Sample(check_data_1d(X)), _resolve_kernel(self.kernel), config,
            threads=self.threads,
        )
        self.result_ = result
        self.h_crit_ = result.h_crit
        self.exceedance_ = result.exceedance
        self.reject_ = result.reject
        return self

    def predict(self, X=None) -> bool:
        """True when unimodality is rejected for the fitted sample."""
        return self._check_fitted("reject_")
