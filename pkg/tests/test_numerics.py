import math

import numpy as np
import pytest

from exclusives.numerics import (ConvergenceError, QuadratureResult,
                                 find_root, normal_cdf, quadrature, shoot_bvp)


class TestQuadrature:
    def test_linear(self):
        assert quadrature(lambda y: y, 0.0, 1.0).value == pytest.approx(0.5, abs=1e-12)

    def test_revenue_integrand(self):
        # antiderivative y^2/2 - y^3/3 gives 1/6 on [0, 1]
        res = quadrature(lambda y: y * (1.0 - y), 0.0, 1.0)
        assert res.value == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_upper_branch_integrand(self):
        # antiderivative y^2 - y - y^3/6: (2/3) - (-1/6) = 5/6 on [1, 2]
        res = quadrature(lambda y: 2.0 * y - 1.0 - 0.5 * y * y, 1.0, 2.0)
        assert res.value == pytest.approx(5.0 / 6.0, abs=1e-12)

    def test_polynomial_exactness_random_intervals(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            coeffs = rng.uniform(-2, 2, size=6)
            a, b = sorted(rng.uniform(-3, 3, size=2))
            poly = np.polynomial.Polynomial(coeffs)
            exact = poly.integ()(b) - poly.integ()(a)
            assert quadrature(poly, a, b).value == pytest.approx(exact, abs=1e-12)

    def test_result_fields(self):
        res = quadrature(lambda y: math.exp(-y * y), 0.0, 5.0)
        assert isinstance(res, QuadratureResult)
        assert res.error >= 0.0
        assert res.subdivisions >= 1

    def test_empty_interval(self):
        assert quadrature(lambda y: y, 2.0, 2.0).value == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(ValueError):
            quadrature(lambda y: y, 1.0, 0.0)


class TestFindRoot:
    def test_linear(self):
        res = find_root(lambda v: v - 0.5, 0.0, 1.0)
        assert res.root == pytest.approx(0.5, abs=1e-12)

    def test_reserve_condition_uniform(self):
        # seller condition for uniform values and zero seller value: 2r - 1
        res = find_root(lambda r: 2.0 * r - 1.0, 0.0, 1.0)
        assert res.root == pytest.approx(0.5, abs=1e-12)

    def test_cos_fixed_point(self):
        # oracle: fixed-point iteration of cos converges to the same root
        target = 1.0
        for _ in range(200):
            target = math.cos(target)
        res = find_root(lambda v: math.cos(v) - v, 0.0, 1.0)
        assert res.root == pytest.approx(target, abs=1e-10)
        assert abs(res.residual) < 1e-10

    def test_root_stays_in_bracket(self):
        res = find_root(lambda v: v**3 - 2e-5, -1e-4, 1.0)
        lo, hi = res.bracket
        assert lo <= res.root <= hi

    def test_no_sign_change(self):
        with pytest.raises(ValueError):
            find_root(lambda v: v * v + 1.0, -1.0, 1.0)


class TestNormalCdf:
    def test_center(self):
        assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_upper_limit(self):
        assert normal_cdf(40.0) == pytest.approx(1.0, abs=1e-15)

    def test_quantile_vs_density_quadrature(self):
        # independent oracle: integrate the density from 0 and add 1/2
        density = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
        oracle = 0.5 + quadrature(density, 0.0, 1.96).value
        assert normal_cdf(1.96) == pytest.approx(oracle, abs=1e-10)
        assert normal_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-10)

    def test_symmetry(self):
        for u in (0.1, 0.7, 1.3, 2.9):
            assert normal_cdf(-u) == pytest.approx(1.0 - normal_cdf(u), abs=1e-15)

    def test_monotone(self):
        grid = np.linspace(-6.0, 6.0, 501)
        vals = normal_cdf(grid)
        assert (np.diff(vals) >= 0.0).all()


def _symmetric_uniform_system(b, y):
    # inverse-bid equation for two uniform[0,1] bidders: phi' = phi/(phi - b)
    phi1, phi2 = y
    return (phi1 / (phi2 - b), phi2 / (phi1 - b))


class TestShootBvp:
    def test_symmetric_uniform_reduction(self):
        sol = shoot_bvp(_symmetric_uniform_system, (0.0, 0.0), (1.0, 1.0),
                        bracket=(1e-9, 1.0 - 1e-6))
        assert sol.right_endpoint == pytest.approx(0.5, abs=1e-9)
        assert np.max(np.abs(sol.curves[0] - 2.0 * sol.grid)) < 1e-8
        assert np.max(np.abs(sol.curves[1] - 2.0 * sol.grid)) < 1e-8

    def test_reversed_component_order(self):
        sol_a = shoot_bvp(_symmetric_uniform_system, (0.0, 0.0), (1.0, 1.0),
                          bracket=(1e-9, 1.0 - 1e-6))

        def flipped(b, y):
            d = _symmetric_uniform_system(b, y[::-1])
            return d[::-1]

        sol_b = shoot_bvp(flipped, (0.0, 0.0), (1.0, 1.0),
                          bracket=(1e-9, 1.0 - 1e-6))
        assert sol_a.right_endpoint == pytest.approx(sol_b.right_endpoint,
                                                     abs=1e-10)
        assert np.allclose(sol_a.curves, sol_b.curves[::-1], atol=1e-10)

    def test_bad_bracket(self):
        with pytest.raises(ConvergenceError):
            shoot_bvp(_symmetric_uniform_system, (0.0, 0.0), (1.0, 1.0),
                      bracket=(0.01, 0.02))
