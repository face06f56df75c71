"""Density estimate tests against direct-sum and quadrature oracles."""

import numpy as np
import pytest
from scipy import integrate

from kdemodes.density import DensityEstimate, PiecewiseFormUnavailable, Sample
from kdemodes.kernels import GaussianKernel, PolynomialKernel, biweight, epanechnikov


def direct_sum(points, kernel, h, x, order=0):
    """Independent reference: explicit python loop over the defining sum."""
    total = 0.0
    for p in points:
        total += kernel.eval((x - p) / h, order)
    return total / (len(points) * h ** (1 + order))


class TestSample:
    def test_sorts_and_counts(self):
        s = Sample([3.0, -1.0, 2.0])
        np.testing.assert_array_equal(s.points, [-1.0, 2.0, 3.0])
        assert s.n == 3
        assert not s.has_duplicates

    def test_duplicates_flagged(self):
        assert Sample([1.0, 1.0, 2.0]).has_duplicates

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Sample([])

    def test_min_spacing(self):
        assert Sample([0.0, 0.25, 1.0]).min_spacing == 0.25


class TestEvaluate:
    def test_single_point_peak(self):
        est = DensityEstimate(Sample([0.0]), biweight(), 0.5)
        assert est.evaluate(0.0) == pytest.approx(0.9375 / 0.5, rel=1e-14)

    def test_zero_outside_support(self):
        est = DensityEstimate(Sample([-1.0, 0.0, 1.0]), biweight(), 0.4)
        assert est.evaluate(5.0) == 0.0
        assert est.evaluate(-1.41) == 0.0

    def test_two_point_epanechnikov_midpoint(self):
        est = DensityEstimate(Sample([0.0, 1.0]), epanechnikov(), 0.75)
        oracle = direct_sum([0.0, 1.0], epanechnikov(), 0.75, 0.5)
        assert oracle == pytest.approx(5.0 / 9.0, rel=1e-12)
        assert est.evaluate(0.5) == pytest.approx(oracle, rel=1e-12)

    @pytest.mark.parametrize("kernel", [epanechnikov(), biweight(), GaussianKernel(0.7)])
    def test_matches_direct_sum_everywhere(self, kernel):
        rng = np.random.default_rng(3)
        pts = np.sort(rng.normal(0, 1, 9))
        est = DensityEstimate(Sample(pts), kernel, 0.37)
        for x in rng.uniform(-3, 3, 40):
            assert est.evaluate(float(x)) == pytest.approx(
                direct_sum(pts, kernel, 0.37, float(x)), rel=1e-12, abs=1e-300
            )

    def test_invalid_bandwidth(self):
        with pytest.raises(ValueError):
            DensityEstimate(Sample([0.0]), biweight(), 0.0)
        with pytest.raises(ValueError):
            DensityEstimate(Sample([0.0]), biweight(), -1.0)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(5)
        pts = np.sort(rng.uniform(-1, 1, 7))
        h, x, c = 0.42, 0.3, 1.7
        base = DensityEstimate(Sample(pts), biweight(), h)
        scaled = DensityEstimate(Sample(c * pts), biweight(), c * h)
        assert scaled.evaluate(c * x) == pytest.approx(base.evaluate(x) / c, rel=1e-12)

    def test_translation_equivariance(self):
        rng = np.random.default_rng(6)
        pts = np.sort(rng.uniform(-1, 1, 7))
        t = 2.375
        base = DensityEstimate(Sample(pts), epanechnikov(), 0.5)
        moved = DensityEstimate(Sample(pts + t), epanechnikov(), 0.5)
        for x in (-0.4, 0.1, 0.9):
            assert moved.evaluate(x + t) == pytest.approx(base.evaluate(x), rel=1e-12)

    def test_reflection_symmetry(self):
        rng = np.random.default_rng(7)
        pts = np.sort(rng.uniform(-2, 2, 6))
        base = DensityEstimate(Sample(pts), biweight(), 0.6)
        mirrored = DensityEstimate(Sample(-pts), biweight(), 0.6)
        for x in (-1.2, 0.05, 1.7):
            assert mirrored.evaluate(-x) == pytest.approx(base.evaluate(x), rel=1e-12)

    def test_derivative_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        pts = np.sort(rng.uniform(0, 1, 8))
        est = DensityEstimate(Sample(pts), biweight(), 0.3)
        xs = rng.uniform(-0.2, 1.2, 50)
        step = 1e-6
        fd = (est.evaluate(xs + step) - est.evaluate(xs - step)) / (2 * step)
        d1 = est.evaluate(xs, order=1)
        np.testing.assert_allclose(d1, fd, atol=1e-5 * max(1.0, np.abs(d1).max()))

    @pytest.mark.parametrize("kernel", [epanechnikov(), biweight(), GaussianKernel(1 / 3)])
    def test_integrates_to_one(self, kernel):
        rng = np.random.default_rng(9)
        pts = np.sort(rng.normal(0, 1, 11))
        est = DensityEstimate(Sample(pts), kernel, 0.45)
        lo, hi = est.support
        if np.isinf(hi):
            lo, hi = pts[0] - 10, pts[-1] + 10
        val, _ = integrate.quad(est.evaluate, lo, hi, limit=400,
                                points=np.clip(pts, lo, hi))
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_nonnegative(self):
        rng = np.random.default_rng(10)
        pts = np.sort(rng.normal(0, 1, 15))
        est = DensityEstimate(Sample(pts), biweight(), 0.2)
        xs = np.linspace(pts[0] - 0.3, pts[-1] + 0.3, 4001)
        assert np.all(est.evaluate(xs) >= 0.0)

    def test_unsorted_queries(self):
        est = DensityEstimate(Sample([-1.0, 0.0, 1.0]), biweight(), 0.8)
        xs = np.array([0.5, -0.7, 0.0, 1.3, -0.1])
        expected = np.array([est.evaluate(float(x)) for x in xs])
        np.testing.assert_allclose(est.evaluate(xs), expected, rtol=1e-14)


class TestPiecewisePoly:
    def test_single_point_linear_derivative(self):
        est = DensityEstimate(Sample([0.0]), epanechnikov(), 1.0)
        pw = est.to_piecewise_poly(order=1)
        assert pw.degree == 1
        np.testing.assert_allclose(pw.breakpoints, [-1.0, 1.0])
        assert pw.n_pieces() == 1

    def test_two_point_derivative_sign_changes(self):
        # dense-grid oracle: the piecewise-linear derivative crosses
        # downward three times (the three modes at 0, 1/2 and 1),
        # alternating with two upward crossings at the antimodes
        est = DensityEstimate(Sample([0.0, 1.0]), epanechnikov(), 0.75)
        pw = est.to_piecewise_poly(order=1)
        xs = np.linspace(-0.75, 1.75, 100_001)
        vals = pw.evaluate(xs)
        nz = np.flatnonzero(vals != 0)
        signs = np.sign(vals[nz])
        down = int(np.sum((signs[:-1] > 0) & (signs[1:] < 0)))
        up = int(np.sum((signs[:-1] < 0) & (signs[1:] > 0)))
        assert down == 3
        assert up == 2

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_matches_evaluate_on_random_sample(self, order):
        rng = np.random.default_rng(12)
        pts = np.sort(rng.uniform(-1, 1, 5))
        h = float(rng.uniform(0.2, 0.9))
        est = DensityEstimate(Sample(pts), biweight(), h)
        pw = est.to_piecewise_poly(order)
        xs = rng.uniform(pts[0] - h, pts[-1] + h, 100)
        direct = est.evaluate(xs, order)
        scale = max(1.0, float(np.abs(direct).max()))
        np.testing.assert_allclose(pw.evaluate(xs), direct, rtol=1e-9, atol=1e-9 * scale)

    def test_continuity_at_breakpoints(self):
        rng = np.random.default_rng(13)
        pts = np.sort(rng.uniform(-1, 1, 6))
        est = DensityEstimate(Sample(pts), biweight(), 0.5)
        pw = est.to_piecewise_poly(0)
        eps = 1e-9
        for t in pw.breakpoints[1:-1]:
            left = pw.evaluate(t - eps)
            right = pw.evaluate(t + eps)
            assert right == pytest.approx(left, rel=1e-6, abs=1e-10)

    def test_zero_outside_range(self):
        est = DensityEstimate(Sample([0.0, 2.0]), epanechnikov(), 0.5)
        pw = est.to_piecewise_poly(0)
        assert pw.evaluate(-0.51) == 0.0
        assert pw.evaluate(2.51) == 0.0

    def test_symmetric_knots_merge(self):
        # {-1, 0, 1} at h = 0.5 produces coincident support edges
        from kdemodes.density import exact_pieces

        knots, _ = exact_pieces(Sample([-1.0, 0.0, 1.0]), biweight(), 0.5)
        assert [float(k) for k in knots] == [-1.5, -0.5, 0.5, 1.5]

    def test_gaussian_unavailable(self):
        est = DensityEstimate(Sample([0.0]), GaussianKernel(1.0), 1.0)
        with pytest.raises(PiecewiseFormUnavailable):
            est.to_piecewise_poly()

    def test_fractional_exponent_unavailable(self):
        est = DensityEstimate(Sample([0.0]), PolynomialKernel(2.5), 1.0)
        with pytest.raises(PiecewiseFormUnavailable):
            est.to_piecewise_poly()

    def test_degree_tracks_order(self):
        est = DensityEstimate(Sample([0.0, 0.6]), biweight(), 0.4)
        assert est.to_piecewise_poly(0).degree == 4
        assert est.to_piecewise_poly(1).degree == 3
        assert est.to_piecewise_poly(2).degree == 2
