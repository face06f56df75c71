"""Kernel density estimation with compactly supported kernels.

Exact mode counting across bandwidths, mode trees, critical and
nonmonotonicity bandwidths, and the smoothed-bootstrap unimodality test.
"""

from .critical import CriticalResult, critical_bandwidth, nonmonotonicity_bandwidth
from .density import DensityEstimate, PiecewiseFormUnavailable, PiecewisePoly, Sample
from .distributions import (
    BetaDensity,
    EpanechnikovDensity,
    MixtureDensity,
    two_cluster_density,
)
from .estimators import CriticalBandwidth, KernelDensity, ModeCounter, UnimodalityTest
from .kernels import (
    GaussianKernel,
    Kernel,
    PolynomialKernel,
    biweight,
    check_pair_condition,
    check_triplet_condition,
    epanechnikov,
    find_triplet_witness,
    parse_kernel,
    triweight,
)
from .modecount import (
    CountMethod,
    Exact,
    Grid,
    ModeCountProfile,
    ModeSet,
    Transition,
    count_modes,
    count_profile,
    mode_count,
)
from .modetree import ModeSpaceMatrix, ModeTrack, ModeTree, build_mode_tree, mode_space
from .rng import RandomState
from .silverman import (
    BootstrapConfig,
    DegenerateSampleError,
    TestResult,
    level_curve,
    log_ratio_experiment,
    resample_from_fcrit,
    silverman_test,
)

__version__ = "0.1.0"

__all__ = [
    "Kernel",
    "PolynomialKernel",
    "GaussianKernel",
    "epanechnikov",
    "biweight",
    "triweight",
    "parse_kernel",
    "check_pair_condition",
    "check_triplet_condition",
    "find_triplet_witness",
    "Sample",
    "DensityEstimate",
    "PiecewisePoly",
    "PiecewiseFormUnavailable",
    "CountMethod",
    "Exact",
    "Grid",
    "ModeSet",
    "Transition",
    "ModeCountProfile",
    "count_modes",
    "mode_count",
    "count_profile",
    "ModeTrack",
    "ModeTree",
    "ModeSpaceMatrix",
    "build_mode_tree",
    "mode_space",
    "CriticalResult",
    "critical_bandwidth",
    "nonmonotonicity_bandwidth",
    "BootstrapConfig",
    "TestResult",
    "DegenerateSampleError",
    "resample_from_fcrit",
    "silverman_test",
    "level_curve",
    "log_ratio_experiment",
    "BetaDensity",
    "EpanechnikovDensity",
    "MixtureDensity",
    "two_cluster_density",
    "RandomState",
    "KernelDensity",
    "ModeCounter",
    "CriticalBandwidth",
    "UnimodalityTest",
    "__version__",
]
