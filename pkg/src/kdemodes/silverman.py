"""The bootstrap bandwidth test for unimodality.

The test statistic is the critical bandwidth of the observed sample.  Each
bootstrap resample is drawn from the density estimate at that bandwidth,
by picking a data point uniformly and adding a bandwidth-scaled kernel
variate (no variance rescaling is applied).  Unimodality is rejected at
level alpha when the share of resample critical bandwidths that do not
exceed the observed one reaches 1 - alpha.

All randomness flows through per-task streams derived from (seed, index),
so results are bit-for-bit identical under any worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .critical import critical_bandwidth
from .density import Sample
from .distributions import EpanechnikovDensity
from .kernels import Kernel
from .modecount import CountMethod, Grid
from .parallel import parallel_map
from .rng import RandomState
from .validation import check_probability

__all__ = [
    "BootstrapConfig",
    "TestResult",
    "DegenerateSampleError",
    "resample_from_fcrit",
    "silverman_test",
    "level_curve",
    "log_ratio_experiment",
]


class DegenerateSampleError(ValueError):
    """All sample points coincide; the test statistic is undefined."""


@dataclass(frozen=True)
class BootstrapConfig:
    """Bootstrap test settings.

    The default counting method trades grid resolution for speed; it is
    plenty for the exceedance proportion, which is a Monte Carlo average.
    Pass ``Grid(1024)`` or ``Exact()`` for single high-stakes calls.
    """

    n_resamples: int = 200
    alpha: float = 0.05
    seed: int = 0
    method: CountMethod = field(default_factory=lambda: Grid(64, 1e-9))
    grid_density: int = 64
    transition_rtol: float = 1e-4

    def __post_init__(self):
        if self.n_resamples < 1:
            raise ValueError(f"n_resamples must be >= 1, got {self.n_resamples}")
        check_probability(self.alpha, "alpha")


@dataclass(frozen=True)
class TestResult:
    """Unimodality test outcome.

    ``exceedance`` is the Monte Carlo estimate of the conditional
    probability that a resample critical bandwidth does not exceed the
    observed one; rejection happens at ``exceedance >= 1 - alpha``.
    """

    h_crit: float
    exceedance: float
    reject: bool
    resample_h_crit: np.ndarray
    alpha: float

    def to_json_dict(self) -> dict:
        return {
            "h_crit": self.h_crit,
            "exceedance": self.exceedance,
            "reject": bool(self.reject),
            "alpha": self.alpha,
            "n_resamples": int(self.resample_h_crit.size),
            "resample_h_crit": [float(v) for v in self.resample_h_crit],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def resample_from_fcrit(sample: Sample, kernel: Kernel, h_crit: float, rng: RandomState) -> Sample:
    """Smoothed bootstrap draw: a data point picked uniformly with
    replacement plus a bandwidth-scaled kernel variate.

    With h_crit = 0 this degenerates to the plain bootstrap.
    """
    if h_crit < 0:
        raise ValueError(f"h_crit must be nonnegative, got {h_crit}")
    n = sample.n
    idx = rng.integers(0, n, size=n)
    eps = np.asarray(kernel.sample(rng, size=n))
    return Sample(sample.points[idx] + h_crit * eps)


def _resample_h_crit(args) -> float:
    points, kernel, h_crit, config, b = args
    rng = RandomState(config.seed).child(b)
    star = resample_from_fcrit(Sample(points), kernel, h_crit, rng)
    res = critical_bandwidth(
        star, kernel, config.method, config.grid_density, full_profile=False,
        transition_rtol=config.transition_rtol,
    )
    return res.h_crit


def silverman_test(
    sample: Sample,
    kernel: Kernel,
    config: BootstrapConfig = BootstrapConfig(),
    *,
    threads: int = 1,
) -> TestResult:
    """Run the bootstrap bandwidth test for unimodality."""
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    if sample.n < 2:
        raise ValueError(f"the test needs at least two observations, got {sample.n}")
    if sample.data_range == 0.0:
        raise DegenerateSampleError("all sample points are equal")

    h_crit = critical_bandwidth(
        sample, kernel, config.method, config.grid_density, full_profile=False,
        transition_rtol=config.transition_rtol,
    ).h_crit
    tasks = [
        (sample.points, kernel, h_crit, config, b) for b in range(config.n_resamples)
    ]
    h_star = np.array(parallel_map(_resample_h_crit, tasks, threads))
    exceedance = float(np.mean(h_star <= h_crit))
    return TestResult(
        h_crit=h_crit,
        exceedance=exceedance,
        reject=exceedance >= 1.0 - config.alpha,
        resample_h_crit=h_star,
        alpha=config.alpha,
    )


# ---------------------------------------------------------------------------
# Experiment drivers
# ---------------------------------------------------------------------------


def _level_replicate(args) -> float:
    density, n, kernel, config, rep = args
    rng = RandomState(config.seed).child(rep, 0)
    sample = Sample(density.sample(rng, n))
    h_crit = critical_bandwidth(
        sample, kernel, config.method, config.grid_density, full_profile=False,
        transition_rtol=config.transition_rtol,
    ).h_crit
    hits = 0
    for b in range(config.n_resamples):
        star = resample_from_fcrit(
            sample, kernel, h_crit, RandomState(config.seed).child(rep, 1 + b)
        )
        h_star = critical_bandwidth(
            star, kernel, config.method, config.grid_density, full_profile=False,
            transition_rtol=config.transition_rtol,
        ).h_crit
        hits += h_star <= h_crit
    return hits / config.n_resamples


def level_curve(
    density,
    n: int,
    kernel: Kernel,
    alphas,
    replicates: int,
    config: BootstrapConfig = BootstrapConfig(),
    *,
    threads: int = 1,
    smooth_window: int = 0,
) -> list[tuple[float, float, float]]:
    """Empirical rejection frequency of the test across nominal levels.

    Each replicate draws a fresh sample and reuses its single set of
    bootstrap resamples across every alpha (only the rejection threshold
    moves).  Returns (alpha, rejection frequency, binomial standard error)
    per alpha.  ``smooth_window`` applies a centred moving average over the
    alpha axis (0 disables it; frequencies are reported raw by default).
    """
    if replicates < 2:
        raise ValueError(f"need at least 2 replicates, got {replicates}")
    alphas = [float(a) for a in alphas]
    if any(a < 0 or a > 1 for a in alphas):
        raise ValueError("alphas must lie in [0, 1]")
    tasks = [(density, n, kernel, config, rep) for rep in range(replicates)]
    exceedances = np.array(parallel_map(_level_replicate, tasks, threads))
    out = []
    rates = []
    for a in alphas:
        rejections = exceedances >= 1.0 - a
        rates.append(float(np.mean(rejections)))
    if smooth_window > 1:
        rates = _moving_average(rates, smooth_window)
    for a, pi_hat in zip(alphas, rates):
        se = math.sqrt(max(pi_hat * (1.0 - pi_hat), 1e-12) / replicates)
        out.append((a, pi_hat, se))
    return out


def _moving_average(values, window: int) -> list[float]:
    half = window // 2
    out = []
    for i in range(len(values)):
        lo, hi = max(0, i - half), min(len(values), i + half + 1)
        out.append(float(np.mean(values[lo:hi])))
    return out


def _log_ratio_replicate(args) -> float | None:
    n, kernel, config, rep = args
    rng = RandomState(config.seed).child(rep)
    sample = Sample(EpanechnikovDensity().sample(rng, n))
    res = critical_bandwidth(
        sample, kernel, config.method, config.grid_density, full_profile=True,
        transition_rtol=config.transition_rtol,
    )
    if res.ratio is None:
        return None
    return math.log(res.ratio)


def log_ratio_experiment(
    n: int,
    kernel: Kernel,
    replicates: int,
    config: BootstrapConfig = BootstrapConfig(),
    *,
    threads: int = 1,
) -> list[float | None]:
    """log(h_crit / h_nonm) over replicates drawn from the Epanechnikov
    density; None marks replicates whose count profile below the critical
    bandwidth was monotone."""
    if replicates < 1:
        raise ValueError(f"need at least 1 replicate, got {replicates}")
    tasks = [(n, kernel, config, rep) for rep in range(replicates)]
    return parallel_map(_log_ratio_replicate, tasks, threads)
