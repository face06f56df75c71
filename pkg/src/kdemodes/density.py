"""The kernel density estimate and its exact piecewise-polynomial form.

For a sample X_1..X_n, kernel K and bandwidth h the estimate and its
derivatives are

    f^(r)(x) = (1 / (n h^(1+r))) * sum_i K^(r)((x - X_i) / h).

When K is a polynomial kernel with integer exponent theta, the estimate is
piecewise polynomial of degree 2*theta with knots at the kernel support
edges {X_i - h, X_i + h}.  The exact representation is built in rational
arithmetic (sample points and bandwidths are floats, hence exact dyadic
rationals), which is what makes mode counting by root isolation exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .kernels import GaussianKernel, Kernel, PolynomialKernel
from .validation import check_data_1d, check_positive

__all__ = [
    "Sample",
    "DensityEstimate",
    "PiecewisePoly",
    "PiecewiseFormUnavailable",
]

# Evaluation is chunked so broadcast temporaries stay below ~64 MB.
_CHUNK_ELEMENTS = 8_000_000


class PiecewiseFormUnavailable(ValueError):
    """The kernel admits no exact piecewise-polynomial representation."""


@dataclass(frozen=True)
class Sample:
    """Sorted univariate sample.

    Duplicate points are accepted (their kernel weights simply stack) but
    flagged, because spacing-based results assume distinct points.
    """

    points: np.ndarray

    def __init__(self, points):
        arr = np.sort(check_data_1d(points, min_len=1, name="sample"))
        arr.flags.writeable = False
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return int(self.points.size)

    @cached_property
    def has_duplicates(self) -> bool:
        return bool(np.any(np.diff(self.points) == 0.0))

    @cached_property
    def min_spacing(self) -> float:
        """Smallest gap between consecutive order statistics (0 if tied)."""
        if self.n < 2:
            raise ValueError("spacings need at least two points")
        return float(np.min(np.diff(self.points)))

    @property
    def data_range(self) -> float:
        return float(self.points[-1] - self.points[0])

    def scaled(self, factor: float, shift: float = 0.0) -> "Sample":
        return Sample(self.points * factor + shift)

    def __eq__(self, other) -> bool:
        return isinstance(other, Sample) and np.array_equal(self.points, other.points)


@dataclass(frozen=True)
class DensityEstimate:
    """Kernel density estimate (sample, kernel, bandwidth)."""

    sample: Sample
    kernel: Kernel
    bandwidth: float

    def __post_init__(self):
        check_positive(self.bandwidth, "bandwidth")
        object.__setattr__(self, "bandwidth", float(self.bandwidth))
        if not isinstance(self.sample, Sample):
            object.__setattr__(self, "sample", Sample(self.sample))

    @property
    def support(self) -> tuple[float, float]:
        """Interval outside which the estimate is identically zero.

        Unbounded for the Gaussian kernel.
        """
        pts = self.sample.points
        r = self.kernel.support_radius * self.bandwidth
        return float(pts[0] - r), float(pts[-1] + r)

    def evaluate(self, x, order: int = 0):
        """Evaluate the estimate or one of its first two derivatives.

        Exact sum of kernel terms, vectorised over ``x``; zero outside the
        support.  For compactly supported kernels only the points within
        one support radius of each query contribute, which the blocked
        path exploits without changing the result.
        """
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        h = self.bandwidth
        if math.isfinite(self.kernel.support_radius):
            if arr.size > 1 and np.any(np.diff(arr) < 0):
                order_idx = np.argsort(arr, kind="stable")
                sorted_vals = blocked_kernel_sum(
                    self.sample.points, self.kernel, h, arr[order_idx], order,
                    self.kernel.support_radius * h,
                )
                out = np.empty_like(sorted_vals)
                out[order_idx] = sorted_vals
            else:
                out = blocked_kernel_sum(
                    self.sample.points, self.kernel, h, arr, order,
                    self.kernel.support_radius * h,
                )
        else:
            pts = self.sample.points
            out = np.empty_like(arr)
            chunk = max(1, _CHUNK_ELEMENTS // max(pts.size, 1))
            for start in range(0, arr.size, chunk):
                block = arr[start : start + chunk]
                u = (block[:, None] - pts[None, :]) / h
                out[start : start + chunk] = self.kernel.eval(u, order).sum(axis=1)
        out /= self.sample.n * h ** (1 + order)
        return float(out[0]) if np.ndim(x) == 0 else out

    def to_piecewise_poly(self, order: int = 0) -> "PiecewisePoly":
        """Exact piecewise-polynomial form of the order-th derivative.

        Requires a polynomial kernel with integer exponent; other kernels
        raise :class:`PiecewiseFormUnavailable`.
        """
        knots, polys = exact_pieces(self.sample, self.kernel, self.bandwidth, order)
        h = Fraction(self.bandwidth)
        scale = 1 / (self.sample.n * h ** (1 + order))
        float_pieces = []
        for poly in polys:
            coeffs = [float(c * scale / h**k) for k, c in enumerate(poly)]
            float_pieces.append(np.array(coeffs, dtype=float))
        pw = PiecewisePoly(
            breakpoints=np.array([float(t) for t in knots]),
            pieces=tuple(float_pieces),
            degree=2 * int(self.kernel.exponent) - order,
        )
        _validate_pieces(pw, self, order)
        return pw


def _validate_pieces(pw: "PiecewisePoly", estimate: DensityEstimate, order: int) -> None:
    # spot check the representation at 3 interior points per piece
    rng = np.random.default_rng(0)
    bp = pw.breakpoints
    for j in range(len(bp) - 1):
        xs = bp[j] + (bp[j + 1] - bp[j]) * rng.uniform(0.05, 0.95, 3)
        direct = estimate.evaluate(xs, order)
        viapoly = pw.evaluate(xs)
        scale = np.maximum(np.abs(direct), 1e-12 * max(1.0, float(np.abs(direct).max(initial=0.0))) + 1e-300)
        if not np.allclose(viapoly, direct, rtol=1e-9, atol=1e-12 * float(np.max(scale))):
            raise AssertionError(
                f"piecewise form disagrees with direct evaluation on piece {j}"
            )


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces between breakpoints, zero outside them.

    ``pieces[j]`` holds coefficients (ascending powers) of the polynomial
    in the shifted variable ``x - breakpoints[j]``, valid on
    ``[breakpoints[j], breakpoints[j+1])``.  The shifted basis keeps
    evaluation well conditioned far from the origin.
    """

    breakpoints: np.ndarray
    pieces: tuple[np.ndarray, ...]
    degree: int

    def evaluate(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(arr)
        bp = self.breakpoints
        idx = np.searchsorted(bp, arr, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.pieces)) & (arr <= bp[-1])
        for j in np.unique(idx[inside]):
            m = inside & (idx == j)
            t = arr[m] - bp[j]
            coeffs = self.pieces[j]
            acc = np.zeros_like(t)
            for c in coeffs[::-1]:
                acc = acc * t + c
            out[m] = acc
        return float(out[0]) if np.ndim(x) == 0 else out

    def n_pieces(self) -> int:
        return len(self.pieces)


def blocked_kernel_sum(
    pts: np.ndarray,
    kernel: Kernel,
    h: float,
    xs_sorted: np.ndarray,
    order: int,
    radius: float,
) -> np.ndarray:
    """sum_i K^(order)((x - X_i)/h) over sorted queries, windowed to the
    points within ``radius`` of each block.

    Exact for compact kernels when radius covers the support; for the
    Gaussian a radius of ``grid_span * h`` truncates terms below 1.3e-14
    of their peak, which internal sign scans tolerate.
    """
    out = np.zeros_like(xs_sorted)
    block = 512
    for start in range(0, xs_sorted.size, block):
        xb = xs_sorted[start : start + block]
        jlo = int(np.searchsorted(pts, xb[0] - radius))
        jhi = int(np.searchsorted(pts, xb[-1] + radius))
        if jlo < jhi:
            u = (xb[:, None] - pts[jlo:jhi][None, :]) / h
            out[start : start + block] = kernel.eval(u, order).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# Exact rational construction
# ---------------------------------------------------------------------------


def exact_pieces(
    sample: Sample, kernel: Kernel, bandwidth: float, order: int = 0
) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact polynomial pieces of sum_i K^(order)((x - X_i)/h), unscaled.

    Returns ``(knots, polys)`` where ``knots`` are the merged support-edge
    positions as exact rationals and ``polys[j]`` are ascending
    coefficients in the scaled local variable ``s = (x - knots[j]) / h``
    on ``s in [0, (knots[j+1] - knots[j]) / h]``.  The prefactor
    ``1/(n h^(1+order))`` and the x-versus-s derivative scaling are left to
    the caller (both are positive, so sign analysis can ignore them).
    """
    if not (isinstance(kernel, PolynomialKernel) and kernel.is_polynomial):
        raise PiecewiseFormUnavailable(
            f"kernel {kernel} has no exact piecewise-polynomial form; "
            "an integer-exponent polynomial kernel is required"
        )
    if order not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {order}")
    h = Fraction(float(bandwidth))
    float_pts = sample.points
    pts = [Fraction(float(p)) for p in float_pts]
    hf = float(bandwidth)

    knots = _merged_knots(pts, h, sample.data_range)

    base = list(kernel.power_coefficients())
    for _ in range(order):
        base = _poly_derivative_fractions(base)

    # pieces fully covered by a single isolated kernel all share the same
    # shifted polynomial; cache compositions by offset (identical list
    # objects let callers memoise downstream work)
    compose_cache: dict[Fraction, list[Fraction]] = {}
    polys: list[list[Fraction]] = []
    for j in range(len(knots) - 1):
        lo, hi = knots[j], knots[j + 1]
        # candidate kernels via a float window, verified exactly
        i0 = int(np.searchsorted(float_pts, float(hi) - hf - 1e-9 * hf))
        i1 = int(np.searchsorted(float_pts, float(lo) + hf + 1e-9 * hf, side="right"))
        acc = None
        owned = False
        for i in range(i0, min(i1, len(pts))):
            p = pts[i]
            if p - h <= lo and hi <= p + h:
                alpha = (lo - p) / h
                shifted = compose_cache.get(alpha)
                if shifted is None:
                    shifted = _poly_compose_affine(base, alpha)
                    compose_cache[alpha] = shifted
                if acc is None:
                    acc = shifted  # borrowed from the cache until a second kernel lands
                else:
                    if not owned:
                        acc = list(acc)
                        owned = True
                    for k, c in enumerate(shifted):
                        acc[k] += c
        polys.append(acc if acc is not None else [Fraction(0)])
    return knots, polys


def _merged_knots(pts: list[Fraction], h: Fraction, data_range: float) -> list[Fraction]:
    # float sort keys are safe: pairs misordered within float rounding are
    # merged by the tolerance below either way
    raw = sorted({p - h for p in pts} | {p + h for p in pts}, key=float)
    # merge near-coincident breakpoints (zero-width pieces otherwise)
    tol = Fraction(float(max(data_range, 2.0 * float(h)))) * Fraction(1, 10**12)
    merged = [raw[0]]
    for t in raw[1:]:
        if t - merged[-1] > tol:
            merged.append(t)
    return merged


def _poly_derivative_fractions(coeffs: list[Fraction]) -> list[Fraction]:
    if len(coeffs) <= 1:
        return [Fraction(0)]
    return [k * c for k, c in enumerate(coeffs)][1:]


def _poly_compose_affine(coeffs: list[Fraction], alpha: Fraction) -> list[Fraction]:
    """Coefficients of p(alpha + s) given those of p(u), ascending."""
    out = [Fraction(0)] * len(coeffs)
    for c in reversed(coeffs):
        # out <- out * (alpha + s) + c
        prev = out
        shifted = [Fraction(0)] * len(coeffs)
        for k in range(len(coeffs) - 1):
            shifted[k + 1] += prev[k]
        for k in range(len(coeffs)):
            shifted[k] += alpha * prev[k]
        shifted[0] += c
        out = shifted
    return out
