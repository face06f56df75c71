"""Mode counting tests: exact root isolation against grid scans and
dense-grid sign oracles."""

import numpy as np
import pytest

from kdemodes.density import DensityEstimate, PiecewiseFormUnavailable, Sample
from kdemodes.kernels import (
    GaussianKernel,
    PolynomialKernel,
    biweight,
    epanechnikov,
    triweight,
)
from kdemodes.modecount import (
    Exact,
    Grid,
    count_modes,
    count_profile,
    mode_count,
)


def dense_grid_mode_count(est, n_points=100_000):
    """Independent oracle: down-crossings of the derivative on a very
    dense grid over the data range."""
    pts = est.sample.points
    pad = 1e-9 * max(est.bandwidth, 1.0)
    xs = np.linspace(pts[0] - pad, pts[-1] + pad, n_points)
    d = est.evaluate(xs, order=1)
    nz = np.flatnonzero(d != 0)
    signs = np.sign(d[nz])
    return int(np.sum((signs[:-1] > 0) & (signs[1:] < 0)))


class TestCountModes:
    def test_three_separated_bumps(self):
        est = DensityEstimate(Sample([-1.0, 0.0, 1.0]), biweight(), 0.4)
        ms = count_modes(est, Exact())
        assert ms.count == 3
        np.testing.assert_allclose(ms.locations, [-1.0, 0.0, 1.0], atol=1e-10)
        assert np.all(ms.heights > 0)

    def test_single_point_single_mode(self):
        for kernel in (epanechnikov(), biweight(), GaussianKernel(0.5)):
            method = Exact() if kernel.is_polynomial else Grid(512)
            ms = count_modes(DensityEstimate(Sample([0.0]), kernel, 0.7), method)
            assert ms.count == 1
            assert ms.locations[0] == pytest.approx(0.0, abs=1e-8)

    def test_false_modes_at_half_points(self):
        est = DensityEstimate(Sample([-1.0, 0.0, 1.0]), epanechnikov(), 0.75)
        ms = count_modes(est, Exact())
        assert ms.count == 5
        np.testing.assert_allclose(ms.locations, [-1.0, -0.5, 0.0, 0.5, 1.0], atol=1e-9)
        assert ms.count == dense_grid_mode_count(est)

    def test_two_point_triweight(self):
        est = DensityEstimate(Sample([0.0, 1.0]), triweight(), 0.45)
        assert count_modes(est, Exact()).count == 2

    def test_six_mode_pocket(self):
        est = DensityEstimate(Sample([-1.0, 0.0, 1.0]), PolynomialKernel(2.5), 1.02)
        ms = count_modes(est, Grid(8192, 1e-12))
        assert ms.count == 6

    def test_exact_rejects_nonpolynomial(self):
        with pytest.raises(PiecewiseFormUnavailable):
            count_modes(DensityEstimate(Sample([0.0]), GaussianKernel(1.0), 1.0), Exact())
        with pytest.raises(PiecewiseFormUnavailable):
            count_modes(DensityEstimate(Sample([0.0]), PolynomialKernel(1.5), 1.0), Exact())

    def test_grid_parameter_floor(self):
        with pytest.raises(ValueError):
            Grid(16)
        with pytest.raises(ValueError):
            Grid(64, 0.0)

    def test_degenerate_flat_kernel(self):
        ms = count_modes(DensityEstimate(Sample([0.0]), PolynomialKernel(0.0), 1.0), Grid(64))
        assert ms.degenerate

    def test_exact_equivariance(self):
        rng = np.random.default_rng(21)
        pts = np.sort(rng.uniform(-1, 1, 6))
        h = 0.37
        base = count_modes(DensityEstimate(Sample(pts), biweight(), h), Exact())
        c, t = 1.75, -0.4
        moved = count_modes(DensityEstimate(Sample(c * pts + t), biweight(), c * h), Exact())
        assert moved.count == base.count
        np.testing.assert_allclose(moved.locations, c * base.locations + t, atol=1e-10)

    def test_mode_count_matches_count_modes(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            pts = np.sort(rng.uniform(-1, 1, int(rng.integers(2, 9))))
            h = float(rng.uniform(0.1, 1.2))
            est = DensityEstimate(Sample(pts), biweight(), h)
            assert mode_count(est, Exact()) == count_modes(est, Exact()).count
            assert mode_count(est, Grid(512)) == count_modes(est, Grid(512)).count


class TestOracleEquivalence:
    def test_exact_vs_grid_random_instances(self):
        rng = np.random.default_rng(33)
        for trial in range(120):
            n = int(rng.integers(2, 13))
            pts = np.sort(rng.uniform(-1, 1, n))
            theta = float(rng.choice([1.0, 2.0, 3.0]))
            h = float(rng.uniform(0.08, 1.5))
            est = DensityEstimate(Sample(pts), PolynomialKernel(theta), h)
            exact = count_modes(est, Exact()).count
            grid = count_modes(est, Grid(4096, 1e-10)).count
            assert exact == grid, f"trial {trial}: n={n} theta={theta} h={h}"

    def test_exact_vs_dense_grid_oracle(self):
        rng = np.random.default_rng(34)
        for _ in range(25):
            pts = np.sort(rng.uniform(-1, 1, int(rng.integers(2, 8))))
            h = float(rng.uniform(0.15, 1.0))
            est = DensityEstimate(Sample(pts), biweight(), h)
            assert count_modes(est, Exact()).count == dense_grid_mode_count(est)


class TestSpacingLaws:
    def test_disjoint_regime_counts_points(self):
        rng = np.random.default_rng(35)
        for _ in range(30):
            n = int(rng.integers(2, 15))
            pts = np.sort(rng.uniform(0, 1, n))
            sample = Sample(pts)
            if sample.has_duplicates:
                continue
            h = 0.49 * sample.min_spacing
            for theta in (1.0, 2.0, 3.0):
                est = DensityEstimate(sample, PolynomialKernel(theta), h)
                assert count_modes(est, Exact()).count == n

    def test_epanechnikov_gains_midpoint_mode(self):
        rng = np.random.default_rng(36)
        hits = 0
        for _ in range(40):
            pts = np.sort(rng.uniform(0, 1, 8))
            sample = Sample(pts)
            h = 0.75 * sample.min_spacing
            est = DensityEstimate(sample, epanechnikov(), h)
            if count_modes(est, Exact()).count >= 9:
                hits += 1
        assert hits >= 38


class TestTwoPointLaws:
    def test_epanechnikov_band_structure(self):
        rng = np.random.default_rng(37)
        for _ in range(25):
            a = float(rng.uniform(-2, 2))
            d = float(rng.uniform(0.2, 2.0))
            sample = Sample([a, a + d])
            expect = {0.49 * d: 2, 0.75 * d: 3, 1.5 * d: 1}
            for h, count in expect.items():
                est = DensityEstimate(sample, epanechnikov(), h)
                assert count_modes(est, Exact()).count == count

    def test_biweight_pairs_nonmonotone(self):
        # midpoint concavity flips inside (d/2, d): the count rises with h
        rng = np.random.default_rng(38)
        for _ in range(15):
            d = float(rng.uniform(0.3, 1.8))
            sample = Sample([0.0, d])
            low = mode_count(DensityEstimate(sample, biweight(), 0.6 * d), Exact())
            high = mode_count(DensityEstimate(sample, biweight(), 0.93 * d), Exact())
            assert low < high

    def test_triweight_pairs_monotone(self):
        rng = np.random.default_rng(39)
        for _ in range(10):
            d = float(rng.uniform(0.3, 1.8))
            profile = count_profile(
                Sample([0.0, d]), triweight(), np.geomspace(0.3 * d, 2.0 * d, 40), Exact()
            )
            assert profile.is_nonincreasing()


class TestCountProfile:
    @pytest.mark.parametrize("kernel,expected", [
        (epanechnikov(), (3, 5, 3, 1)),
        (biweight(), (3, 5, 2, 3, 1)),
        (triweight(), (3, 4, 2, 1)),
    ])
    def test_three_point_sequences(self, kernel, expected):
        profile = count_profile(
            Sample([-1.0, 0.0, 1.0]), kernel, np.geomspace(0.05, 3.0, 80), Exact()
        )
        assert profile.compressed == expected

    def test_gaussian_nonincreasing(self):
        profile = count_profile(
            Sample([-1.0, 0.0, 1.0]), GaussianKernel(1 / 3),
            np.geomspace(0.05, 3.0, 80), Grid(256),
        )
        assert profile.is_nonincreasing()
        assert profile.compressed[0] == 3

    def test_band_discovery_on_sparse_grid(self):
        # four grid points cannot see all biweight bands; refinement must
        # discover them anyway
        profile = count_profile(
            Sample([-1.0, 0.0, 1.0]), biweight(), np.geomspace(0.05, 3.0, 5), Exact()
        )
        assert profile.compressed == (3, 5, 2, 3, 1)

    def test_segments_partition_range(self):
        profile = count_profile(
            Sample([-1.0, 0.0, 1.0]), epanechnikov(), np.geomspace(0.05, 3.0, 40), Exact()
        )
        segs = profile.segments()
        assert segs[0][0] == pytest.approx(0.05)
        assert segs[-1][1] == pytest.approx(3.0)
        for (_, hi, _), (lo, _, _) in zip(segs, segs[1:]):
            assert hi == lo

    def test_transitions_are_refined(self):
        profile = count_profile(
            Sample([0.0, 1.0]), epanechnikov(), np.geomspace(0.2, 2.0, 16), Exact()
        )
        bands = {t.bandwidth: (t.count_below, t.count_above) for t in profile.transitions}
        assert any(abs(h - 0.5) < 1e-5 for h in bands)
        assert any(abs(h - 1.0) < 1e-5 for h in bands)

    def test_profile_grid_validation(self):
        with pytest.raises(ValueError):
            count_profile(Sample([0.0, 1.0]), biweight(), [0.5, 0.5, 1.0], Exact())
        with pytest.raises(ValueError):
            count_profile(Sample([0.0, 1.0]), biweight(), [1.0, 0.5], Exact())

    def test_threads_do_not_change_profile(self):
        grid = np.geomspace(0.1, 2.0, 24)
        base = count_profile(Sample([-1.0, 0.0, 1.0]), biweight(), grid, Exact(), threads=1)
        multi = count_profile(Sample([-1.0, 0.0, 1.0]), biweight(), grid, Exact(), threads=2)
        np.testing.assert_array_equal(base.counts, multi.counts)
        assert base.compressed == multi.compressed
