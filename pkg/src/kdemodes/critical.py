"""Critical and nonmonotonicity bandwidths.

The critical bandwidth is the infimum of bandwidths above which the
estimate stays unimodal for every larger bandwidth.  Because mode counts
need not be monotone in the bandwidth for compactly supported kernels,
unimodality at one bandwidth never certifies anything above it: the search
verifies count 1 on an entire log-spaced grid from a doubling upper cap
down to the largest multimodal bandwidth, then refines that boundary by
bisection.

The nonmonotonicity bandwidth is the largest bandwidth below the critical
one at which the mode count drops while the bandwidth decreases; their
ratio measures how close below the critical bandwidth the count stops
being monotone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .density import Sample
from .kernels import GaussianKernel, Kernel
from .modecount import (
    CountMethod,
    Exact,
    Grid,
    ModeCountProfile,
    Transition,
    _count_at,
    _refine_transitions,
    batched_grid_counts,
)

__all__ = [
    "CriticalResult",
    "critical_bandwidth",
    "nonmonotonicity_bandwidth",
]

_MAX_DOUBLINGS = 64
# Below this many grid points the grid scan is cheaper; above it, integer
# exponent kernels switch to exact counting, whose cost at small bandwidths
# is bounded by the (few) overlapping kernels instead of the grid size.
_EXACT_SWITCH_POINTS = 262_144


def _scan_method(sample: Sample, kernel: Kernel, method: CountMethod, h: float) -> CountMethod:
    if isinstance(method, Grid) and getattr(kernel, "is_polynomial", False):
        n_pts = method.points_per_unit_bandwidth * (
            sample.data_range / (h * kernel.feature_scale) + 2.0
        )
        if n_pts > _EXACT_SWITCH_POINTS:
            return Exact()
    return method


def _scan_counts(sample: Sample, kernel: Kernel, method: CountMethod, hs: list[float]) -> list[int]:
    """Scan counts for a batch of bandwidths under the scan counter.

    Grid methods use the batched sign-scan engine; bandwidths whose grid
    would blow past the exact-switch budget route through exact counting
    when the kernel admits it.
    """
    if not hs:
        return []
    if isinstance(method, Grid):
        grid_idx = [i for i, h in enumerate(hs)
                    if isinstance(_scan_method(sample, kernel, method, h), Grid)]
        out = [0] * len(hs)
        if grid_idx:
            counts = batched_grid_counts(
                sample, kernel, [hs[i] for i in grid_idx], method.points_per_unit_bandwidth
            )
            for i, c in zip(grid_idx, counts):
                out[i] = int(c)
        grid_set = set(grid_idx)
        for i in range(len(hs)):
            if i not in grid_set:
                out[i] = _count_at(sample, kernel, Exact(), hs[i])
        return out
    return [_count_at(sample, kernel, method, h) for h in hs]


@dataclass(frozen=True)
class CriticalResult:
    """Critical bandwidth search output.

    ``h_nonm`` is None when the profile below ``h_crit`` is monotone
    nonincreasing in the bandwidth (or, if ``scanned_below_crit`` is
    False, because the search stopped at ``h_crit``).
    """

    h_crit: float
    profile: ModeCountProfile
    upper_bound_used: float
    h_nonm: float | None = None
    ratio: float | None = None
    scanned_below_crit: bool = True

    def to_json_dict(self) -> dict:
        return {
            "h_crit": self.h_crit,
            "h_nonm": self.h_nonm,
            "ratio": self.ratio,
            "compressed_profile": [list(seg) for seg in self.profile.segments()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _trivial_result(h_cap: float) -> CriticalResult:
    profile = ModeCountProfile(
        bandwidths=np.array([h_cap]), counts=np.array([1]), transitions=()
    )
    return CriticalResult(h_crit=0.0, profile=profile, upper_bound_used=h_cap)


def critical_bandwidth(
    sample: Sample,
    kernel: Kernel,
    method: CountMethod = Exact(),
    grid_density: int = 64,
    *,
    full_profile: bool = True,
    transition_rtol: float = 1e-6,
) -> CriticalResult:
    """Critical bandwidth by downward scan with a verified doubling cap.

    grid_density is the number of scan points per decade of bandwidth
    (>= 64).  With ``full_profile`` the scan continues below the critical
    bandwidth to the disjoint-bump regime so the nonmonotonicity bandwidth
    can be read off the profile; otherwise the scan stops at the first
    multimodal bandwidth, which is all a bootstrap test needs.
    """
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    if grid_density < 64:
        raise ValueError(f"grid_density must be >= 64, got {grid_density}")
    if sample.n == 1 or sample.data_range == 0.0:
        return _trivial_result(max(1.0, 2.0 * sample.data_range))

    count_at = lambda h: _scan_counts(sample, kernel, method, [float(h)])[0]

    # upper cap: start above twice the data range, verified and doubled
    cap = 2.0 * sample.data_range * max(1.0, kernel.feature_scale) + 1e-9
    for _ in range(_MAX_DOUBLINGS):
        if count_at(cap) == 1:
            break
        cap *= 2.0
    else:
        raise RuntimeError("no unimodal bandwidth found; kernel may not smooth out")

    # positive distinct spacings exist here (range > 0); below half the
    # smallest one the bumps are disjoint and the count is constant
    diffs = np.diff(sample.points)
    s_min = float(np.min(diffs[diffs > 0]))
    floor = s_min / (4.0 * kernel.feature_scale)
    floor = min(floor, 0.5 * cap)

    n_pts = max(2, int(math.ceil(grid_density * math.log10(cap / floor))) + 1)
    grid_desc = np.geomspace(cap, floor, n_pts)

    if isinstance(kernel, GaussianKernel):
        # Gaussian counts are monotone nonincreasing in the bandwidth
        # (variation-diminishing smoothing), so a bisection search is exact
        # here and much cheaper than the verify-everything scan that
        # nonmonotone kernels force; by the same property the profile
        # below the critical bandwidth cannot drop, so the
        # nonmonotonicity bandwidth is absent.  The monotonicity itself is
        # exercised independently by the count-profile tests.
        result = _gaussian_bisection(sample, kernel, count_at, cap, floor, transition_rtol)
        if full_profile and result.h_crit > 0:
            result = CriticalResult(
                h_crit=result.h_crit,
                profile=result.profile,
                upper_bound_used=result.upper_bound_used,
                h_nonm=None,
                ratio=None,
                scanned_below_crit=True,
            )
        return result

    chunk = 16
    if full_profile:
        # descend in fixed chunks (batched, deterministic) and stop as soon
        # as the count falls below its running maximum: that first drop is
        # the largest one, which settles the nonmonotonicity decision; the
        # descent runs to the disjoint-bump floor only when no drop exists,
        # to certify its absence
        scanned = []
        seen_multimodal = False
        running_max = 0
        stop = False
        for start in range(0, len(grid_desc), chunk):
            hs = [float(h) for h in grid_desc[start : start + chunk]]
            cs = _scan_counts(sample, kernel, method, hs)
            for h, c in zip(hs, cs):
                scanned.append((h, c))
                if seen_multimodal and c < running_max:
                    stop = True
                    break
                if c >= 2:
                    seen_multimodal = True
                    running_max = max(running_max, c)
            if stop:
                break
    else:
        scanned = []
        stop = False
        for start in range(0, len(grid_desc), chunk):
            hs = [float(h) for h in grid_desc[start : start + chunk]]
            cs = _scan_counts(sample, kernel, method, hs)
            for h, c in zip(hs, cs):
                scanned.append((h, c))
                if c >= 2:
                    stop = True
                    break
            if stop:
                break
        if not stop:
            # never multimodal down to the disjoint regime: extend downward
            h = float(grid_desc[-1])
            while h > 1e-12 * sample.data_range:
                h *= 0.5
                c = count_at(h)
                scanned.append((h, c))
                if c >= 2:
                    break

    grid_asc = np.array([h for h, _ in scanned])[::-1]
    counts_asc = np.array([c for _, c in scanned])[::-1]

    multimodal = np.flatnonzero(counts_asc >= 2)
    if multimodal.size == 0:
        return _trivial_result(cap)

    # refine by bisection only where precision matters: the topmost
    # transition (h_crit itself) and, scanning down from it, the first pair
    # where the count falls below its running maximum (the candidate
    # nonmonotonicity boundary).  All other change points are recorded at
    # grid resolution; full refinement of every boundary is count_profile's
    # job and is prohibitively slow for large samples.
    i_top = int(multimodal[-1])
    transitions: list[Transition] = list(
        _refine_transitions(
            count_at,
            float(grid_asc[i_top]),
            int(counts_asc[i_top]),
            float(grid_asc[i_top + 1]),
            int(counts_asc[i_top + 1]),
            transition_rtol,
        )
    )
    h_crit = transitions[-1].bandwidth

    if full_profile:
        running_max = None
        for i in range(i_top - 1, -1, -1):
            c_hi, c_lo = int(counts_asc[i + 1]), int(counts_asc[i])
            running_max = c_hi if running_max is None else max(running_max, c_hi)
            if c_lo < max(running_max, c_hi):
                transitions.extend(
                    _refine_transitions(
                        count_at, float(grid_asc[i]), c_lo, float(grid_asc[i + 1]), c_hi,
                        transition_rtol,
                    )
                )
                break
            running_max = max(running_max, c_lo)
    for i in range(len(grid_asc) - 1):
        if counts_asc[i] != counts_asc[i + 1]:
            h_mid = math.sqrt(float(grid_asc[i]) * float(grid_asc[i + 1]))
            if not any(grid_asc[i] < t.bandwidth < grid_asc[i + 1] for t in transitions):
                transitions.append(
                    Transition(h_mid, int(counts_asc[i]), int(counts_asc[i + 1]), refined=False)
                )
    transitions.sort(key=lambda t: t.bandwidth)
    profile = ModeCountProfile(
        bandwidths=grid_asc, counts=counts_asc, transitions=tuple(transitions)
    )

    result = CriticalResult(
        h_crit=h_crit,
        profile=profile,
        upper_bound_used=cap,
        scanned_below_crit=full_profile,
    )
    if full_profile:
        h_nonm = nonmonotonicity_bandwidth(result)
        ratio = h_crit / h_nonm if h_nonm is not None else None
        result = CriticalResult(
            h_crit=h_crit,
            profile=profile,
            upper_bound_used=cap,
            h_nonm=h_nonm,
            ratio=ratio,
            scanned_below_crit=True,
        )
    return result


def _gaussian_bisection(sample, kernel, count_at, cap, floor, rtol) -> CriticalResult:
    probes: list[tuple[float, int]] = [(cap, 1)]
    lo = None
    h = cap
    while h > min(floor, 1e-12 * max(sample.data_range, 1.0)):
        h *= 0.5
        c = count_at(h)
        probes.append((h, c))
        if c >= 2:
            lo, c_lo = h, c
            break
    if lo is None:
        return _trivial_result(cap)
    hi = 2.0 * lo
    while hi - lo > rtol * lo:
        mid = math.sqrt(lo * hi)
        c = count_at(mid)
        probes.append((mid, c))
        if c >= 2:
            lo, c_lo = mid, c
        else:
            hi = mid
    h_crit = 0.5 * (lo + hi)
    probes.sort()
    profile = ModeCountProfile(
        bandwidths=np.array([p[0] for p in probes]),
        counts=np.array([p[1] for p in probes]),
        transitions=(Transition(h_crit, int(c_lo), 1),),
    )
    return CriticalResult(
        h_crit=h_crit,
        profile=profile,
        upper_bound_used=cap,
        scanned_below_crit=False,
    )


def nonmonotonicity_bandwidth(
    result: CriticalResult, rule: str = "drop"
) -> float | None:
    """Largest bandwidth below the critical one where the count profile
    violates monotone nonincrease.

    rule='drop' (default): scanning the bandwidth downward from the
    critical value, the first boundary where the count falls below the
    running maximum seen so far.  rule='rise': the largest boundary at
    which the count increases with increasing bandwidth (the top of the
    inverted region); kept for comparisons since the two readings differ
    on some profiles.
    """
    if not result.scanned_below_crit:
        raise ValueError(
            "the critical-bandwidth search stopped at h_crit; recompute with "
            "full_profile=True to decide nonmonotonicity"
        )
    if rule not in ("drop", "rise"):
        raise ValueError(f"rule must be 'drop' or 'rise', got {rule!r}")
    below = [t for t in result.profile.transitions if t.bandwidth < result.h_crit]
    if rule == "rise":
        rises = [t.bandwidth for t in below if t.count_above > t.count_below]
        return max(rises) if rises else None
    running_max = None
    for t in sorted(below, key=lambda t: -t.bandwidth):
        upper = t.count_above
        lower = t.count_below
        running_max = upper if running_max is None else max(running_max, upper)
        if lower < max(running_max, upper):
            return t.bandwidth
        running_max = max(running_max, lower)
    return None
