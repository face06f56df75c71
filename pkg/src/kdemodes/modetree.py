"""Mode trees and the exponent-bandwidth mode-count matrix.

A mode tree traces every mode location of a density estimate as the
bandwidth sweeps downward; tracks open when modes appear, close when they
vanish, and point at the track they split from.  The count of live tracks
at any bandwidth equals the mode count there, which is the invariant that
carries the analysis (track identity is bookkeeping).

The mode-space matrix tabulates mode counts over a grid of kernel
exponents and bandwidths for one sample, using exact counting on integer
exponents and the grid method elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import DensityEstimate, Sample
from .kernels import Kernel, PolynomialKernel
from .modecount import CountMethod, Exact, Grid, count_modes, mode_count
from .parallel import parallel_map
from .validation import check_grid

__all__ = [
    "ModeTrack",
    "ModeTree",
    "ModeSpaceMatrix",
    "build_mode_tree",
    "mode_space",
]


@dataclass
class ModeTrack:
    """One mode followed across bandwidths (largest h first)."""

    track_id: int
    parent_id: int | None
    path: list[tuple[float, float]] = field(default_factory=list)

    @property
    def birth_bandwidth(self) -> float:
        return self.path[0][0]

    @property
    def death_bandwidth(self) -> float:
        return self.path[-1][0]

    def location_at_birth(self) -> float:
        return self.path[0][1]


@dataclass(frozen=True)
class ModeTree:
    """Mode trajectories across a descending bandwidth grid."""

    tracks: tuple[ModeTrack, ...]
    h_grid: np.ndarray
    counts: np.ndarray

    def live_track_count(self, h_index: int) -> int:
        h = float(self.h_grid[h_index])
        return sum(
            1
            for t in self.tracks
            if any(hp == h for hp, _ in t.path)
        )

    def edge_rows(self) -> list[tuple[int, int | None, float, float]]:
        """(track_id, parent_id, birth_bandwidth, death_bandwidth) rows."""
        return [
            (t.track_id, t.parent_id, t.birth_bandwidth, t.death_bandwidth)
            for t in self.tracks
        ]

    def path_rows(self) -> list[tuple[int, float, float]]:
        """(track_id, bandwidth, location) rows, tree order."""
        return [(t.track_id, h, loc) for t in self.tracks for h, loc in t.path]


def build_mode_tree(
    sample: Sample,
    kernel: Kernel,
    h_grid,
    method: CountMethod = Exact(),
    *,
    threads: int = 1,
) -> ModeTree:
    """Trace mode locations down a strictly decreasing bandwidth grid.

    Modes at consecutive bandwidths are matched by nearest location under
    a threshold scaling with the bandwidth step and the local mode
    spacing; unmatched new modes open tracks whose parent is the nearest
    surviving track, and tracks with no match close.
    """
    grid = check_grid(h_grid, name="h_grid", descending=True)
    if len(grid) < 2:
        raise ValueError("the bandwidth grid needs at least two points")

    sets = parallel_map(
        _modes_worker, [(sample, kernel, method, float(h)) for h in grid], threads
    )

    tracks: list[ModeTrack] = []
    live: dict[int, float] = {}  # track_id -> last location
    counts = []
    for i, (h, modeset) in enumerate(zip(grid, sets)):
        h = float(h)
        locs = [loc for loc, _ in modeset.modes]
        counts.append(len(locs))
        if not tracks:
            for loc in locs:
                tracks.append(ModeTrack(len(tracks), None, [(h, loc)]))
                live[tracks[-1].track_id] = loc
            continue

        dh = abs(float(grid[i - 1]) - h)
        spacing = _min_gap(list(live.values()))
        threshold = 1.5 * (dh + spacing)

        matches = _nearest_matching(live, locs, threshold)
        new_live: dict[int, float] = {}
        for j, loc in enumerate(locs):
            tid = matches.get(j)
            if tid is None:
                parent = _nearest_track(live, loc)
                tid = len(tracks)
                tracks.append(ModeTrack(tid, parent, []))
            tracks[tid].path.append((h, loc))
            new_live[tid] = loc
        live = new_live
    return ModeTree(tracks=tuple(tracks), h_grid=grid, counts=np.array(counts, dtype=int))


def _modes_worker(args):
    sample, kernel, method, h = args
    return count_modes(DensityEstimate(sample, kernel, h), method)


def _min_gap(locs: list[float]) -> float:
    if len(locs) < 2:
        return math.inf
    ordered = sorted(locs)
    return min(b - a for a, b in zip(ordered, ordered[1:]))


def _nearest_matching(live: dict[int, float], locs: list[float], threshold: float) -> dict[int, int]:
    """Injective nearest-location assignment: new-mode index -> track id."""
    pairs = sorted(
        (abs(loc - last), tid, j)
        for tid, last in live.items()
        for j, loc in enumerate(locs)
    )
    taken_tracks: set[int] = set()
    matches: dict[int, int] = {}
    for dist, tid, j in pairs:
        if dist > threshold and math.isfinite(threshold):
            break
        if tid in taken_tracks or j in matches:
            continue
        matches[j] = tid
        taken_tracks.add(tid)
    return matches


def _nearest_track(live: dict[int, float], loc: float) -> int | None:
    if not live:
        return None
    return min(live, key=lambda tid: abs(live[tid] - loc))


# ---------------------------------------------------------------------------
# Mode space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeSpaceMatrix:
    """Mode counts over (exponent, bandwidth); rows follow the bandwidth
    grid, columns the exponent grid."""

    theta_grid: np.ndarray
    h_grid: np.ndarray
    counts: np.ndarray

    def column_compressed(self, theta_index: int, descending: bool = True) -> tuple[int, ...]:
        """Run-length compressed counts down (or up) one exponent column."""
        col = self.counts[:, theta_index]
        if descending:
            col = col[::-1]
        out = [int(col[0])]
        for c in col[1:]:
            if int(c) != out[-1]:
                out.append(int(c))
        return tuple(out)

    def cell_count(self, theta: float, h: float) -> int:
        i = int(np.argmin(np.abs(self.h_grid - h)))
        j = int(np.argmin(np.abs(self.theta_grid - theta)))
        return int(self.counts[i, j])


def _column_worker(args) -> list[int]:
    sample, theta, h_values, method = args
    kernel = PolynomialKernel(theta)
    use: CountMethod = Exact() if kernel.is_polynomial else method
    return [
        mode_count(DensityEstimate(sample, kernel, h), use) for h in h_values
    ]


def mode_space(
    sample: Sample,
    theta_grid,
    h_grid,
    method: CountMethod = Grid(256, 1e-9),
    *,
    threads: int = 1,
) -> ModeSpaceMatrix:
    """Mode-count matrix over an exponent grid and a bandwidth grid.

    Counting is exact wherever the exponent is an integer; elsewhere the
    supplied grid method applies.  Cells are independent, evaluated in
    parallel and assembled by index, so the matrix is reproducible
    bit-for-bit at any worker count.
    """
    thetas = check_grid(theta_grid, name="theta_grid")
    hs = check_grid(h_grid, name="h_grid")
    tasks = [(sample, float(t), [float(h) for h in hs], method) for t in thetas]
    columns = parallel_map(_column_worker, tasks, threads)
    counts = np.array(columns, dtype=int).T
    return ModeSpaceMatrix(theta_grid=thetas, h_grid=hs, counts=counts)
