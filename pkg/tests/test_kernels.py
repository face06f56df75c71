"""Kernel family tests against independent quadrature and difference oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from kdemodes.kernels import (
    GaussianKernel,
    PolynomialKernel,
    biweight,
    check_pair_condition,
    check_triplet_condition,
    epanechnikov,
    find_triplet_witness,
    parse_kernel,
    triweight,
)
from kdemodes.rng import RandomState


def quad_normalizer(theta: float) -> float:
    # (1 - x^2)^theta = (1 + x)^theta (1 - x)^theta: an algebraic-endpoint
    # weight, which quad integrates with certified accuracy
    val, err = integrate.quad(lambda x: 1.0, -1, 1, weight="alg", wvar=(theta, theta))
    assert err < 1e-11
    return 1.0 / val


class TestNormalizer:
    def test_uniform_degenerate(self):
        assert PolynomialKernel(0.0).normalizer == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("theta,expected", [(1.0, 0.75), (2.0, 0.9375), (3.0, 1.09375)])
    def test_integer_closed_forms(self, theta, expected):
        kernel = PolynomialKernel(theta)
        assert kernel.normalizer == expected
        assert kernel.normalizer == pytest.approx(quad_normalizer(theta), rel=1e-12)

    @pytest.mark.parametrize("theta", [0.3, 0.5, 2.5, 5.5, 11.0])
    def test_quadrature_cross_check(self, theta):
        assert PolynomialKernel(theta).normalizer == pytest.approx(
            quad_normalizer(theta), rel=1e-10
        )

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            PolynomialKernel(-0.5)

    @pytest.mark.parametrize("theta", [0.025, 0.5, 1.0, 2.0, 2.5, 3.0, 7.0, 12.0])
    def test_unit_mass(self, theta):
        kernel = PolynomialKernel(theta)
        val, _ = integrate.quad(lambda x: kernel.eval(x), -1, 1, epsabs=1e-13, limit=200)
        assert abs(val - 1.0) <= 1e-10


class TestEvaluation:
    def test_peak_is_normalizer(self):
        assert biweight().eval(0.0) == pytest.approx(0.9375, abs=1e-15)

    def test_compact_support(self):
        for theta in (0.5, 1.0, 2.0, 3.7):
            kernel = PolynomialKernel(theta)
            for order in (0, 1, 2):
                assert kernel.eval(1.2, order) == 0.0
                assert kernel.eval(-55.0, order) == 0.0

    def test_biweight_second_derivative_closed_case(self):
        # central differences of order-0 evaluations as the oracle
        kernel = biweight()
        x, step = 0.5, 1e-5
        oracle = (kernel.eval(x + step) - 2 * kernel.eval(x) + kernel.eval(x - step)) / step**2
        assert kernel.eval(x, 2) == pytest.approx(-0.9375, abs=1e-12)
        assert kernel.eval(x, 2) == pytest.approx(oracle, abs=1e-5)

    def test_gaussian_third_scale_peak(self):
        kernel = GaussianKernel(1.0 / 3.0)
        assert kernel.eval(0.0) == pytest.approx(3.0 / math.sqrt(2 * math.pi), rel=1e-14)
        val, _ = integrate.quad(kernel.eval, -np.inf, np.inf)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_unsupported_order(self):
        with pytest.raises(ValueError):
            biweight().eval(0.1, order=3)

    @pytest.mark.parametrize("kernel", [
        epanechnikov(), biweight(), triweight(), PolynomialKernel(2.5),
        PolynomialKernel(0.7), GaussianKernel(0.5),
    ])
    def test_derivatives_match_finite_differences(self, kernel):
        rng = np.random.default_rng(42)
        xs = rng.uniform(-0.93, 0.93, 100)
        step = 1e-6
        d1 = kernel.eval(xs, 1)
        fd1 = (kernel.eval(xs + step) - kernel.eval(xs - step)) / (2 * step)
        np.testing.assert_allclose(d1, fd1, atol=1e-6 * max(1.0, np.abs(d1).max()))
        d2 = kernel.eval(xs, 2)
        fd2 = (kernel.eval(xs + step, 1) - kernel.eval(xs - step, 1)) / (2 * step)
        np.testing.assert_allclose(d2, fd2, atol=1e-5 * max(1.0, np.abs(d2).max()))

    @given(st.floats(min_value=-2.0, max_value=2.0),
           st.floats(min_value=0.2, max_value=6.0))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, x, theta):
        kernel = PolynomialKernel(theta)
        assert kernel.eval(x) == pytest.approx(kernel.eval(-x), rel=1e-14, abs=1e-300)

    @pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 3.0, 4.5])
    def test_strictly_unimodal(self, theta):
        kernel = PolynomialKernel(theta)
        xs = np.linspace(1e-4, 1 - 1e-9, 512)
        assert np.all(kernel.eval(xs, 1) < 0)

    def test_boundary_derivative_conventions(self):
        # one-sided limits where finite, zero otherwise
        assert epanechnikov().eval(1.0, 1) == pytest.approx(-1.5)
        assert biweight().eval(1.0, 1) == 0.0
        assert biweight().eval(1.0, 2) == pytest.approx(8 * 0.9375)
        assert epanechnikov().eval(1.0, 2) == 0.0
        assert PolynomialKernel(0.5).eval(1.0, 1) == 0.0


class TestSampling:
    def test_moments_biweight(self):
        n = 1_000_000
        draws = biweight().sample(RandomState(7), size=n)
        var_oracle, _ = integrate.quad(lambda x: x * x * biweight().eval(x), -1, 1)
        se_mean = math.sqrt(var_oracle / n)
        assert abs(draws.mean()) <= 4 * se_mean
        # variance of the sample variance ~ (m4 - m2^2)/n
        m4, _ = integrate.quad(lambda x: x**4 * biweight().eval(x), -1, 1)
        se_var = math.sqrt((m4 - var_oracle**2) / n)
        assert abs(draws.var() - var_oracle) <= 4 * se_var

    def test_variance_epanechnikov(self):
        draws = PolynomialKernel(1.0).sample(RandomState(11), size=1_000_000)
        var_oracle, _ = integrate.quad(lambda x: x * x * PolynomialKernel(1.0).eval(x), -1, 1)
        assert var_oracle == pytest.approx(0.2, abs=1e-12)
        assert draws.var() == pytest.approx(0.2, abs=4 * 0.2 / math.sqrt(1e6) * 2)

    def test_fixed_seed_repeats(self):
        a = triweight().sample(RandomState(123), size=500)
        b = triweight().sample(RandomState(123), size=500)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("theta", [1.0, 2.0, 3.0])
    def test_kolmogorov_smirnov(self, theta):
        kernel = PolynomialKernel(theta)
        draws = kernel.sample(RandomState(5), size=100_000)
        stat = stats.kstest(draws, kernel.cdf).statistic
        threshold = stats.kstwobign.ppf(0.999) / math.sqrt(len(draws))
        assert stat < threshold

    def test_kolmogorov_smirnov_noninteger(self):
        kernel = PolynomialKernel(2.5)
        draws = kernel.sample(RandomState(5), size=20_000)
        stat = stats.kstest(draws, kernel.cdf).statistic
        assert stat < stats.kstwobign.ppf(0.999) / math.sqrt(len(draws))

    def test_gaussian_sampling(self):
        draws = GaussianKernel(1 / 3).sample(RandomState(9), size=200_000)
        assert draws.std() == pytest.approx(1 / 3, rel=0.02)


class TestShapeConditions:
    @pytest.mark.parametrize("theta", [0.5, 1.0, 1.5, 2.0, 2.4])
    def test_pair_condition_holds(self, theta):
        assert check_pair_condition(theta) is True

    @pytest.mark.parametrize("theta", [2.6, 3.0, 4.0])
    def test_pair_condition_fails(self, theta):
        assert check_pair_condition(theta) is False

    def test_triplet_condition_triweight(self):
        assert check_triplet_condition(3.0, 0.9, 0.45) is True

    def test_triplet_slope_cancellation_is_exact(self):
        kernel = triweight()
        spacing, probe = 0.9, 0.45
        slope = (kernel.eval(spacing + probe, 1)
                 - kernel.eval(spacing - probe, 1)
                 + kernel.eval(probe, 1))
        assert abs(slope) < 1e-12

    def test_triplet_curvature_at_origin(self):
        # 2 K''(0.9) + K''(0) for the triweight, frozen from closed forms
        kernel = triweight()
        curv = 2 * kernel.eval(0.9, 2) + kernel.eval(0.0, 2)
        assert curv == pytest.approx(1.0434375, abs=1e-10)
        assert curv > 0

    def test_witness_search(self):
        witness = find_triplet_witness(3.0, resolution=200)
        assert witness is not None
        spacing, probe = witness
        assert check_triplet_condition(3.0, spacing, probe)


class TestParsing:
    @pytest.mark.parametrize("spec,expected", [
        ("epan", PolynomialKernel(1.0)),
        ("epanechnikov", PolynomialKernel(1.0)),
        ("biweight", PolynomialKernel(2.0)),
        ("triweight", PolynomialKernel(3.0)),
        ("multiweight:2.5", PolynomialKernel(2.5)),
        ("gaussian:0.333", GaussianKernel(0.333)),
        ("gaussian", GaussianKernel(1.0)),
    ])
    def test_accepted_forms(self, spec, expected):
        assert parse_kernel(spec) == expected

    def test_rejects_unknown(self):
        with pytest.raises(ValueError):
            parse_kernel("box")
        with pytest.raises(ValueError):
            parse_kernel("multiweight")
