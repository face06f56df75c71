"""Counting and locating the modes of a density estimate.

A mode is a strict local maximum.  Estimates built from integer-exponent
polynomial kernels are piecewise polynomial, so their modes can be counted
exactly: the derivative's roots are isolated piece by piece in rational
arithmetic (Sturm sequences with a Bernstein-basis Descartes prefilter)
and classified by the derivative's sign change.  Down-crossings are modes,
up-crossings are antimodes, and tangencies (no sign change) are ignored,
matching the convention that densities have finitely many inflection
points.  Critical points that land exactly on a knot, where polynomial
pieces meet and one-sided derivatives are well defined, are classified by
the exact one-sided signs.

The grid method works for every kernel: it scans the derivative's sign on
a fine grid, subdivides suspicious cells, and refines each crossing by
bisection.  Both methods agree on random instances; the exact method is
the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import polyroots as pr
from .density import DensityEstimate, Sample, blocked_kernel_sum, exact_pieces
from .kernels import Kernel
from .parallel import parallel_map
from .validation import check_grid

__all__ = [
    "Exact",
    "Grid",
    "CountMethod",
    "ModeSet",
    "Transition",
    "ModeCountProfile",
    "count_modes",
    "mode_count",
    "count_profile",
]


@dataclass(frozen=True)
class Exact:
    """Exact counting via root isolation; integer-exponent kernels only."""


@dataclass(frozen=True)
class Grid:
    """Sign-scan counting on a grid of ``points_per_unit_bandwidth`` points
    per bandwidth-length, with bracket refinement to ``refine_tolerance``
    (relative to the bandwidth)."""

    points_per_unit_bandwidth: int = 1024
    refine_tolerance: float = 1e-9

    def __post_init__(self):
        if self.points_per_unit_bandwidth < 32:
            raise ValueError(
                f"points_per_unit_bandwidth must be >= 32, got {self.points_per_unit_bandwidth}"
            )
        if not self.refine_tolerance > 0:
            raise ValueError("refine_tolerance must be positive")


CountMethod = Exact | Grid


@dataclass(frozen=True)
class ModeSet:
    """Strict local maxima of a density estimate, sorted by location.

    ``degenerate`` flags an interval on which the derivative vanished
    identically (a plateau); a plateau that is a local maximum contributes
    a single mode at its midpoint.
    """

    modes: tuple[tuple[float, float], ...]
    degenerate: bool = False

    @property
    def count(self) -> int:
        return len(self.modes)

    @property
    def locations(self) -> np.ndarray:
        return np.array([m[0] for m in self.modes])

    @property
    def heights(self) -> np.ndarray:
        return np.array([m[1] for m in self.modes])


def count_modes(estimate: DensityEstimate, method: CountMethod = Exact()) -> ModeSet:
    """Count and locate the modes of a density estimate."""
    if isinstance(method, Exact):
        return _count_exact(estimate, locate=True)
    if isinstance(method, Grid):
        return _count_grid(estimate, method, locate=True)
    raise TypeError(f"unknown counting method {method!r}")


def mode_count(estimate: DensityEstimate, method: CountMethod = Exact()) -> int:
    """The number of modes, skipping location refinement (same count)."""
    if isinstance(method, Exact):
        return _count_exact(estimate, locate=False).count
    if isinstance(method, Grid):
        return _count_grid(estimate, method, locate=False).count
    raise TypeError(f"unknown counting method {method!r}")


# ---------------------------------------------------------------------------
# Exact counting
# ---------------------------------------------------------------------------


def _count_exact(estimate: DensityEstimate, locate: bool = True) -> ModeSet:
    sample, kernel, h = estimate.sample, estimate.kernel, estimate.bandwidth
    knots, polys0 = exact_pieces(sample, kernel, h, order=0)
    h_frac = Fraction(float(h))
    n_pieces = len(polys0)
    widths = [(knots[j + 1] - knots[j]) / h_frac for j in range(n_pieces)]

    # isolated kernels repeat one shared piece object; process each
    # distinct polynomial once
    piece_cache: dict[int, tuple[list, list, Fraction]] = {}
    deriv: list[list] = []
    deriv_int: list[list] = []
    const_value: list[Fraction] = []
    for p0 in polys0:
        info = piece_cache.get(id(p0))
        if info is None:
            d = pr.trim(pr.poly_derivative(p0))
            d_int = pr.primitive_int(d) if d else []
            trimmed = pr.trim(p0)
            c0 = trimmed[0] if trimmed else Fraction(0)
            info = (d, d_int, c0)
            piece_cache[id(p0)] = info
        deriv.append(info[0])
        deriv_int.append(info[1])
        const_value.append(info[2])

    locations: list[float] = []
    degenerate = False

    # interior roots, knot roots deflated out and handled below; isolated
    # kernels repeat identical pieces (shared list objects), so isolation
    # and one-sided signs are memoised per distinct piece
    root_cache: dict[tuple[int, Fraction], list[Fraction]] = {}
    for j, p in enumerate(deriv_int):
        if not p:
            continue
        w = widths[j]
        key = (id(polys0[j]), w)
        down_roots = root_cache.get(key)
        if down_roots is None:
            down_roots = []
            q, flip = _deflate_endpoints(p, w)
            if q:
                for root in pr.isolate_roots(q, Fraction(0), w):
                    if flip * root.sign_before > 0 > flip * root.sign_after:
                        if locate:
                            down_roots.append(pr.refine_crossing(q, root))
                        else:
                            down_roots.append((root.lo + root.hi) / 2)
            root_cache[key] = down_roots
        for s in down_roots:
            locations.append(float(knots[j] + h_frac * s))

    side_cache: dict[tuple[int, Fraction, int], int] = {}

    def side_sign(j: int, point: Fraction, side: int) -> int:
        if not deriv_int[j]:
            return 0
        key = (id(polys0[j]), point, side)
        val = side_cache.get(key)
        if val is None:
            val = pr.one_sided_sign(deriv_int[j], point, side)
            side_cache[key] = val
        return val

    # critical points at interior knots, classified by one-sided signs
    for j in range(1, n_pieces):
        ls = side_sign(j - 1, widths[j - 1], -1)
        rs = side_sign(j, Fraction(0), +1)
        if ls > 0 > rs:
            locations.append(float(knots[j]))

    # plateau runs: derivative identically zero with positive density
    j = 0
    while j < n_pieces:
        if deriv_int[j] or const_value[j] <= 0:
            j += 1
            continue
        k = j
        while k + 1 < n_pieces and not deriv_int[k + 1] and const_value[k + 1] > 0:
            k += 1
        degenerate = True
        ls = side_sign(j - 1, widths[j - 1], -1) if j > 0 else 0
        rs = side_sign(k + 1, Fraction(0), +1) if k + 1 < n_pieces else 0
        if ls > 0 > rs:
            locations.append(float((knots[j] + knots[k + 1]) / 2))
        j = k + 1

    locations.sort()
    if locate and locations:
        heights = estimate.evaluate(np.array(locations))
        modes = tuple(zip(locations, heights.tolist()))
    else:
        modes = tuple((loc, math.nan) for loc in locations)
    return ModeSet(modes, degenerate=degenerate)


def _deflate_endpoints(p: list[int], w: Fraction) -> tuple[list[int], int]:
    """Divide out every root at s = 0 and s = w (classified at knots).

    Each removed (s - w) factor is negative on the open piece, so the
    quotient's sign changes are flipped relative to the original's;
    returns (quotient, flip) with flip in {+1, -1} restoring them.
    """
    q = list(p)
    while q and q[0] == 0:
        q = q[1:]
    flip = 1
    while q and pr.sign_at(q, w) == 0:
        q = _synthetic_divide(q, w)
        flip = -flip
    return q, flip


def _synthetic_divide(p: list[int], r: Fraction) -> list[int]:
    # exact quotient of p by (s - r); remainder must vanish
    quotient: list[Fraction] = [Fraction(0)] * (len(p) - 1)
    acc = Fraction(0)
    for k in range(len(p) - 1, 0, -1):
        acc = acc * r + p[k]
        quotient[k - 1] = acc
    assert acc * r + p[0] == 0, "deflation applied at a non-root"
    return pr.primitive_int(quotient)


# ---------------------------------------------------------------------------
# Grid counting
# ---------------------------------------------------------------------------

_SUBDIVIDE = 64
_REFINE_PASSES = 2
_MAX_GRID_POINTS = 4_000_000


def _deriv_unscaled(estimate: DensityEstimate, xs_sorted: np.ndarray) -> np.ndarray:
    """Derivative values up to a positive factor, windowed for speed."""
    kernel, h = estimate.kernel, estimate.bandwidth
    return blocked_kernel_sum(
        estimate.sample.points, kernel, h, xs_sorted, 1, kernel.grid_span * h
    )


def _floored_deriv(estimate: DensityEstimate, xs_sorted: np.ndarray) -> np.ndarray:
    """Derivative values with magnitudes below the rounding-noise floor
    zeroed out.

    Near-flat stretches of wide-bandwidth estimates produce derivative
    sums whose true value is far below the accumulated rounding error of
    their terms; their float signs are noise and would otherwise read as
    phantom mode/antimode pairs.  The floor is 32 eps per contributing
    kernel term, scaled by the kernel's derivative bound.
    """
    kernel, h = estimate.kernel, estimate.bandwidth
    pts = estimate.sample.points
    d = blocked_kernel_sum(pts, kernel, h, xs_sorted, 1, kernel.grid_span * h)
    r = kernel.grid_span * h
    n_win = np.searchsorted(pts, xs_sorted + r) - np.searchsorted(pts, xs_sorted - r)
    tau = (32.0 * np.finfo(float).eps * kernel.derivative_bound) * n_win
    return np.where(np.abs(d) > tau, d, 0.0)


def _count_grid(estimate: DensityEstimate, method: Grid, locate: bool = True) -> ModeSet:
    # Every mode and antimode lies in [X_(1), X_(n)]: left of the smallest
    # point each kernel derivative term is >= 0, so the estimate cannot
    # down-cross there (mirrored on the right).  One extra step on each
    # side brackets crossings at the extremes themselves.
    pts = estimate.sample.points
    kernel, h = estimate.kernel, estimate.bandwidth
    feat = kernel.feature_scale * h
    step = feat / method.points_per_unit_bandwidth
    lo, hi = pts[0] - step, pts[-1] + step
    n_pts = int(math.ceil((hi - lo) / step)) + 1
    n_pts = min(max(n_pts, 65), _MAX_GRID_POINTS)
    xs = np.linspace(lo, hi, n_pts)
    d = _floored_deriv(estimate, xs)
    dmax = float(np.max(np.abs(d)))
    if dmax == 0.0:
        # derivative vanished everywhere probed: one flat bump
        mid = float(0.5 * (pts[0] + pts[-1]))
        return ModeSet(((mid, float(estimate.evaluate(mid))),), degenerate=True)

    degenerate = _has_plateau(estimate, xs, d, dmax)

    intervals = _candidate_intervals(xs, d, dmax)
    cells: list[tuple[float, float, bool]] = []
    for a, b in intervals:
        sub_cells = [(a, b, False)]
        for _ in range(_REFINE_PASSES):
            next_cells = []
            for ca, cb, _down in sub_cells:
                sub = np.linspace(ca, cb, _SUBDIVIDE + 1)
                dsub = _floored_deriv(estimate, sub)
                next_cells.extend(_sign_change_cells(sub, dsub))
            sub_cells = next_cells
        cells.extend(sub_cells)

    down_cells = [(a, b) for a, b, down in cells if down]
    if not locate:
        return ModeSet(tuple((0.5 * (a + b), math.nan) for a, b in down_cells), degenerate=degenerate)

    tol = method.refine_tolerance * feat
    modes = []
    for a, b in down_cells:
        root = _bisect_root(estimate, a, b, tol)
        modes.append((root, float(estimate.evaluate(root))))
    modes.sort()
    return ModeSet(tuple(modes), degenerate=degenerate)


def _sign_change_cells(xs: np.ndarray, d: np.ndarray) -> list[tuple[float, float, bool]]:
    """(a, b, is_down_crossing) for each sign change between nonzero values."""
    nz = np.flatnonzero(d != 0.0)
    if nz.size < 2:
        return []
    signs = np.sign(d[nz])
    changes = np.flatnonzero(signs[:-1] != signs[1:])
    return [
        (float(xs[nz[i]]), float(xs[nz[i + 1]]), signs[i] > 0) for i in changes
    ]


def _candidate_intervals(xs: np.ndarray, d: np.ndarray, dmax: float) -> list[tuple[float, float]]:
    cells = [(a, b) for a, b, _ in _sign_change_cells(xs, d)]
    # near-tangency guard: isolated dips of |f'| may hide a mode/antimode
    # pair inside one cell without a net sign change
    absd = np.abs(d)
    interior = np.arange(1, len(d) - 1)
    dips = interior[
        (absd[interior] <= absd[interior - 1])
        & (absd[interior] <= absd[interior + 1])
        & (absd[interior] < 1e-5 * dmax)
        & (d[interior] != 0.0)
    ]
    for i in dips:
        cells.append((float(xs[i - 1]), float(xs[i + 1])))
    return _merge_intervals(cells)


def _merge_intervals(cells: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Merge overlapping or touching intervals so no root is bracketed twice."""
    if not cells:
        return []
    cells = sorted(cells)
    merged = [cells[0]]
    for a, b in cells[1:]:
        la, lb = merged[-1]
        if a <= lb:
            merged[-1] = (la, max(lb, b))
        else:
            merged.append((a, b))
    return merged


def _has_plateau(estimate: DensityEstimate, xs: np.ndarray, d: np.ndarray, dmax: float) -> bool:
    # flat stretch of the derivative with positive density; support gaps
    # (where the density itself is zero) do not count
    tiny = np.abs(d) < 1e-14 * dmax
    if not np.any(tiny):
        return False
    padded = np.concatenate(([False], tiny, [False]))
    starts = np.flatnonzero(padded[1:] & ~padded[:-1])
    ends = np.flatnonzero(padded[:-1] & ~padded[1:])
    mids = [(s + e) // 2 for s, e in zip(starts, ends) if e - s >= 3]
    if not mids:
        return False
    vals = estimate.evaluate(xs[np.array(mids)])
    return bool(np.any(vals > 0))


def _bisect_root(estimate: DensityEstimate, lo: float, hi: float, tol: float) -> float:
    # precondition: f'(lo) > 0 >= f'(hi) up to grid detection
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _floored_deriv(estimate, np.array([mid]))[0] > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Batched scan counting
# ---------------------------------------------------------------------------

_SCAN_CHUNK_ELEMENTS = 8_000_000


def batched_grid_counts(sample: Sample, kernel: Kernel, h_values, ppub: int) -> np.ndarray:
    """Down-crossing counts of the derivative for many bandwidths at once.

    This is the bandwidth-scan engine: one sign pass per bandwidth on a
    grid of ``ppub`` points per feature length, evaluated in a handful of
    vectorised operations across all bandwidths together.  It skips the
    subdivision passes of :func:`count_modes`, which only matter for
    sub-grid tangency pairs; scans localise their own transitions by
    bisection, so the cheap counter is the right tool.
    """
    pts = sample.points
    feat = kernel.feature_scale
    n = pts.size
    h_arr = [float(h) for h in h_values]
    xs_parts = []
    h_parts = []
    seg_parts = []
    for k, h in enumerate(h_arr):
        step = feat * h / ppub
        span = kernel.grid_span * h
        lo, hi = pts[0] - step, pts[-1] + step
        if 2.0 * span * n < 0.6 * (hi - lo):
            # small bandwidths: the derivative vanishes (or underflows)
            # outside the point neighbourhoods, so grid only those
            for a, b in _point_neighbourhoods(pts, span + step):
                g = max(int(math.ceil((b - a) / step)) + 1, 9)
                g = min(g, _MAX_GRID_POINTS)
                xs_parts.append(np.linspace(a, b, g))
                h_parts.append(np.full(g, h))
                seg_parts.append(np.full(g, k, dtype=np.intp))
        else:
            g = max(int(math.ceil((hi - lo) / step)) + 1, 33)
            g = min(g, _MAX_GRID_POINTS)
            xs_parts.append(np.linspace(lo, hi, g))
            h_parts.append(np.full(g, h))
            seg_parts.append(np.full(g, k, dtype=np.intp))
    xs_all = np.concatenate(xs_parts)
    h_all = np.concatenate(h_parts)
    seg_all = np.concatenate(seg_parts)

    # windowed blocks: only points within kernel reach of a block contribute
    d = np.empty_like(xs_all)
    block = 512
    for start in range(0, xs_all.size, block):
        xb = xs_all[start : start + block]
        hb = h_all[start : start + block]
        reach = kernel.grid_span * float(hb.max())
        jlo = int(np.searchsorted(pts, float(xb.min()) - reach))
        jhi = int(np.searchsorted(pts, float(xb.max()) + reach))
        if jlo >= jhi:
            d[start : start + block] = 0.0
            continue
        u = (xb[:, None] - pts[None, jlo:jhi]) / hb[:, None]
        d[start : start + block] = kernel.eval(u, 1).sum(axis=1)

    # rounding-noise floor, as in the pointwise counter
    span = kernel.grid_span * h_all
    n_win = np.searchsorted(pts, xs_all + span) - np.searchsorted(pts, xs_all - span)
    tau = (32.0 * np.finfo(float).eps * kernel.derivative_bound) * n_win
    nz = np.flatnonzero(np.abs(d) > tau)
    if nz.size < 2:
        return np.zeros(len(h_arr), dtype=int)
    signs = d[nz] > 0
    seg = seg_all[nz]
    down = signs[:-1] & ~signs[1:] & (seg[:-1] == seg[1:])
    return np.bincount(seg[:-1][down], minlength=len(h_arr)).astype(int)


def _point_neighbourhoods(pts: np.ndarray, reach: float) -> list[tuple[float, float]]:
    """Merged intervals [X_i - reach, X_i + reach] over the sorted sample."""
    out: list[tuple[float, float]] = []
    lo = pts[0] - reach
    hi = pts[0] + reach
    for p in pts[1:]:
        if p - reach <= hi:
            hi = p + reach
        else:
            out.append((lo, hi))
            lo, hi = p - reach, p + reach
    out.append((lo, hi))
    return out


# ---------------------------------------------------------------------------
# Count profiles over bandwidth grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    """A bandwidth at which the mode count changes.

    ``refined`` distinguishes bisection-localised boundaries from coarse
    ones recorded at grid resolution.
    """

    bandwidth: float
    count_below: int
    count_above: int
    refined: bool = True


@dataclass(frozen=True)
class ModeCountProfile:
    """Mode counts over a bandwidth grid with refined change points."""

    bandwidths: np.ndarray
    counts: np.ndarray
    transitions: tuple[Transition, ...]

    @property
    def compressed(self) -> tuple[int, ...]:
        """Run-length compressed count sequence, increasing bandwidth."""
        if not self.transitions:
            return (int(self.counts[0]),)
        seq = [self.transitions[0].count_below]
        for t in self.transitions:
            if t.count_above != seq[-1]:
                seq.append(t.count_above)
        return tuple(seq)

    def segments(self) -> list[tuple[float, float, int]]:
        """(h_lo, h_hi, count) bands covering the probed range."""
        h_lo = float(self.bandwidths[0])
        out = []
        count = self.transitions[0].count_below if self.transitions else int(self.counts[0])
        for t in self.transitions:
            out.append((h_lo, t.bandwidth, count))
            h_lo, count = t.bandwidth, t.count_above
        out.append((h_lo, float(self.bandwidths[-1]), count))
        return out

    def is_nonincreasing(self) -> bool:
        """True when the count never rises as the bandwidth grows."""
        seq = self.compressed
        return all(b <= a for a, b in zip(seq, seq[1:]))


def _count_at(sample: Sample, kernel: Kernel, method: CountMethod, h: float) -> int:
    return mode_count(DensityEstimate(sample, kernel, h), method)


def _profile_worker(args) -> int:
    sample, kernel, method, h = args
    return _count_at(sample, kernel, method, h)


def count_profile(
    sample: Sample,
    kernel: Kernel,
    h_grid,
    method: CountMethod = Exact(),
    *,
    transition_rtol: float = 1e-6,
    threads: int = 1,
) -> ModeCountProfile:
    """Mode counts along a bandwidth grid, with each count change localised
    by bisection (geometric, to relative ``transition_rtol``).

    The bisection re-counts at probe bandwidths, so count bands narrower
    than the grid spacing are still discovered down to the tolerance.
    """
    grid = check_grid(h_grid, name="h_grid")
    counts = parallel_map(
        _profile_worker, [(sample, kernel, method, float(h)) for h in grid], threads
    )
    counts = np.array(counts, dtype=int)

    transitions: list[Transition] = []
    for i in range(len(grid) - 1):
        if counts[i] != counts[i + 1]:
            transitions.extend(
                _refine_transitions(
                    lambda h: _count_at(sample, kernel, method, h),
                    float(grid[i]),
                    int(counts[i]),
                    float(grid[i + 1]),
                    int(counts[i + 1]),
                    transition_rtol,
                )
            )
    return ModeCountProfile(
        bandwidths=grid, counts=counts, transitions=tuple(transitions)
    )


def _refine_transitions(count_fn, h_lo, c_lo, h_hi, c_hi, rtol) -> list[Transition]:
    if c_lo == c_hi:
        return []
    if h_hi - h_lo <= rtol * h_lo:
        return [Transition(0.5 * (h_lo + h_hi), c_lo, c_hi)]
    mid = math.sqrt(h_lo * h_hi)
    c_mid = count_fn(mid)
    return _refine_transitions(count_fn, h_lo, c_lo, mid, c_mid, rtol) + _refine_transitions(
        count_fn, mid, c_mid, h_hi, c_hi, rtol
    )
