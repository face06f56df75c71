"""Root isolation tests; numpy's eigenvalue root finder is the oracle."""

from fractions import Fraction as F

import numpy as np
import pytest

from kdemodes.polyroots import (
    bernstein_variations,
    count_roots,
    isolate_roots,
    one_sided_sign,
    poly_derivative,
    primitive_int,
    refine_crossing,
    sign_at,
    sturm_chain,
)


def numpy_real_roots(coeffs, a, b):
    """Distinct real roots in (a, b) via the companion matrix, deduplicated."""
    roots = np.roots(list(reversed(coeffs)))
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-9 and a < r.real < b)
    out = []
    for r in real:
        if not out or r - out[-1] > 1e-7:
            out.append(r)
    return out


class TestPrimitives:
    def test_primitive_int_scales_and_preserves_sign(self):
        assert primitive_int([F(1, 2), F(-3, 4)]) == [2, -3]
        assert primitive_int([4, -8, 12]) == [1, -2, 3]
        assert primitive_int([0, 0]) == []

    def test_sign_at_rational(self):
        p = [-6, 11, -6, 1]  # (x-1)(x-2)(x-3)
        assert sign_at(p, F(0)) == -1
        assert sign_at(p, F(5, 2)) == -1
        assert sign_at(p, F(7, 2)) == 1
        assert sign_at(p, F(2)) == 0

    def test_one_sided_signs(self):
        square = [1, -2, 1]  # (x-1)^2
        assert one_sided_sign(square, 1, +1) == 1
        assert one_sided_sign(square, 1, -1) == 1
        cube = [0, 0, 0, 1]
        assert one_sided_sign(cube, 0, -1) == -1
        assert one_sided_sign(cube, 0, +1) == 1
        assert one_sided_sign([0], 0, +1) == 0


class TestSturm:
    def test_simple_cubic_counts(self):
        chain = sturm_chain([-6, 11, -6, 1])
        assert count_roots(chain, F(0), F(4)) == 3
        assert count_roots(chain, F(0), F(2)) == 2
        assert count_roots(chain, F(0), F(1, 2)) == 0

    def test_repeated_roots_count_distinct(self):
        # (x-1)^2 (x-3): two distinct real roots
        chain = sturm_chain([-3, 7, -5, 1])
        assert count_roots(chain, F(0), F(4)) == 2

    def test_against_numpy_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(60):
            deg = int(rng.integers(2, 8))
            coeffs = [int(c) for c in rng.integers(-9, 10, deg + 1)]
            if coeffs[-1] == 0:
                coeffs[-1] = 1
            chain = sturm_chain(coeffs)
            expected = len(numpy_real_roots(coeffs, -10, 10))
            got = count_roots(chain, F(-10), F(10))
            assert got == expected, (coeffs, got, expected)


class TestIsolation:
    def test_isolates_and_refines(self):
        p = [-6, 11, -6, 1]
        roots = isolate_roots(p, F(0), F(4))
        assert len(roots) == 3
        refined = [float(refine_crossing(p, r)) for r in roots]
        np.testing.assert_allclose(refined, [1.0, 2.0, 3.0], atol=1e-11)

    def test_tangency_has_no_sign_change(self):
        roots = isolate_roots([-3, 7, -5, 1], F(0), F(4))
        crossing = [r for r in roots if r.is_crossing]
        tangent = [r for r in roots if not r.is_crossing]
        assert len(crossing) == 1 and len(tangent) == 1

    def test_random_instances_match_numpy(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            deg = int(rng.integers(2, 7))
            coeffs = [int(c) for c in rng.integers(-6, 7, deg + 1)]
            if coeffs[-1] == 0:
                coeffs[-1] = 1
            if sign_at(coeffs, F(-5)) == 0 or sign_at(coeffs, F(5)) == 0:
                continue
            expected = numpy_real_roots(coeffs, -5, 5)
            got = isolate_roots(coeffs, F(-5), F(5))
            assert len(got) == len(expected), coeffs
            for interval, root in zip(got, expected):
                assert float(interval.lo) - 1e-9 <= root <= float(interval.hi) + 1e-9

    def test_bernstein_prefilter_bounds(self):
        p = [-6, 11, -6, 1]
        assert bernstein_variations(p, F(4), F(6)) == 0
        assert bernstein_variations(p, F(0), F(4)) >= 3

    def test_derivative(self):
        assert poly_derivative([1, 2, 3]) == [2, 6]
        assert poly_derivative([5]) == []
