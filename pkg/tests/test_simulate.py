import dataclasses
import math

import numpy as np
import pytest

from exclusives.simulate import (SecurityPathParams, SeedRanges,
                                 PortfolioTimeSeries, build_portfolio_dataset,
                                 dataset_params, draw_security_params,
                                 simulate_gbm_path, simulate_locates,
                                 simulate_locates_poisson, with_seed)


class TestGbmPath:
    def test_zero_vol_identity(self):
        rng = np.random.default_rng(0)
        path = simulate_gbm_path(100.0, 0.0, 0.0, 5, rng)
        assert np.array_equal(path, np.full(5, 100.0))

    def test_monte_carlo_drift_moment(self):
        # oracle: E[S_T] = S_0 exp(mu T) for the exact log-Euler scheme
        rng = np.random.default_rng(42)
        finals = np.empty(100_000)
        for i in range(finals.size):
            finals[i] = simulate_gbm_path(100.0, 0.05, 0.2, 252, rng)[-1]
        assert finals.mean() == pytest.approx(100.0 * math.exp(0.05), rel=0.01)

    def test_log_return_moments(self):
        # sample moments of 1e5 log returns vs (mu - sigma^2/2) dt and
        # sigma^2 dt, within three standard errors
        mu, sigma, dt = 0.08, 0.35, 1.0 / 252.0
        rng = np.random.default_rng(7)
        returns = np.concatenate([
            np.diff(np.log(simulate_gbm_path(50.0, mu, sigma, 101, rng)))
            for _ in range(1000)])
        n = returns.size
        assert n == 100_000
        mean_target = (mu - 0.5 * sigma**2) * dt
        var_target = sigma**2 * dt
        se_mean = sigma * math.sqrt(dt) / math.sqrt(n)
        se_var = var_target * math.sqrt(2.0 / (n - 1))
        assert abs(returns.mean() - mean_target) < 3.0 * se_mean
        assert abs(returns.var(ddof=1) - var_target) < 3.0 * se_var

    def test_deterministic_for_seed(self):
        a = simulate_gbm_path(1.0, 0.1, 0.3, 50, np.random.default_rng(123))
        b = simulate_gbm_path(1.0, 0.1, 0.3, 50, np.random.default_rng(123))
        assert np.array_equal(a, b)

    def test_strictly_positive(self):
        for seed in range(10):
            path = simulate_gbm_path(0.01, -1.0, 3.0, 252,
                                     np.random.default_rng(seed))
            assert (path > 0).all()

    def test_domain_errors(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            simulate_gbm_path(0.0, 0.0, 0.1, 5, rng)
        with pytest.raises(ValueError):
            simulate_gbm_path(1.0, 0.0, -0.1, 5, rng)
        with pytest.raises(ValueError):
            simulate_gbm_path(1.0, 0.0, 0.1, 0, rng)


class TestLocates:
    def test_degenerate_zero(self):
        rng = np.random.default_rng(0)
        assert np.array_equal(simulate_locates(0.0, 0.0, 4, rng), np.zeros(4))

    def test_degenerate_constant(self):
        rng = np.random.default_rng(0)
        assert np.array_equal(simulate_locates(1000.0, 0.0, 4, rng),
                              np.full(4, 1000.0))

    def test_half_normal_mean(self):
        # oracle: E|N(0,1)| = sqrt(2/pi)
        rng = np.random.default_rng(99)
        draws = simulate_locates(0.0, 1.0, 1_000_000, rng)
        assert draws.mean() == pytest.approx(math.sqrt(2.0 / math.pi), rel=0.01)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        assert (simulate_locates(-500.0, 2000.0, 10_000, rng) >= 0).all()

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            simulate_locates(0.0, -1.0, 4, np.random.default_rng(0))

    def test_poisson_variant(self):
        rng = np.random.default_rng(5)
        draws = simulate_locates_poisson(300.0, 20_000, rng)
        assert (draws >= 0).all()
        assert draws.mean() == pytest.approx(300.0, rel=0.02)


class TestDrawParams:
    def test_degenerate_intervals(self):
        ranges = SeedRanges(price_vol=(0.2, 0.2), delta=(0.5, 0.5),
                            n_securities=5)
        for p in draw_security_params(ranges):
            assert p.sigma_price == 0.2
            assert p.delta == 0.5

    def test_range_containment(self):
        ranges = SeedRanges(n_securities=50)
        for p in draw_security_params(ranges):
            lo, hi = ranges.price_vol
            assert lo <= p.sigma_price <= hi
            lo, hi = ranges.rate_init
            assert lo <= p.rate_0 <= hi

    def test_quantity_vols_exceed_price_vols(self):
        # the seeded intervals keep borrow/inventory/holding vols above the
        # price and rate vols
        ranges = SeedRanges()
        assert ranges.borrow_vol[0] >= ranges.price_vol[1]
        assert ranges.inventory_vol[0] >= ranges.price_vol[1]
        assert ranges.holding_vol[0] >= ranges.price_vol[1]

    def test_deterministic(self):
        ranges = SeedRanges(n_securities=7, seed=21)
        assert draw_security_params(ranges) == draw_security_params(ranges)

    def test_invalid_interval(self):
        with pytest.raises(ValueError):
            SeedRanges(price_vol=(0.4, 0.1))

    def test_param_validation(self):
        with pytest.raises(ValueError):
            SecurityPathParams(
                mu_price=0, sigma_price=-0.1, mu_rate=0, sigma_rate=0.1,
                mu_borrow=0, sigma_borrow=1, mu_inventory=0,
                sigma_inventory=1, mu_holding=0, sigma_holding=1,
                locate_mean=0, locate_std=0, delta=0.5, rate_spread=0.5,
                price_0=10, rate_0=0.01, borrow_0=10, inventory_0=10,
                holding_0=10)


class TestBuildDataset:
    def test_single_cell_residual(self):
        ranges = SeedRanges(n_securities=1, n_days=1, seed=3)
        ts = build_portfolio_dataset(ranges)
        expected = max(ts.borrow[0, 0] + ts.delta[0] * ts.locates[0, 0]
                       - ts.inventory[0, 0] - ts.holdings[0, 0], 0.0)
        assert ts.external[0, 0] == expected

    def test_default_shape_and_invariants(self):
        ts = build_portfolio_dataset(SeedRanges(seed=1))
        assert ts.price.shape == (100, 252)
        assert (ts.price > 0).all() and (ts.rate > 0).all()
        assert (ts.borrow > 0).all() and (ts.inventory > 0).all()
        assert (ts.holdings > 0).all()
        assert (ts.locates >= 0).all()
        assert (ts.alt_rate <= ts.rate).all()
        assert (ts.external >= 0).all()

    def test_alt_rate_is_spread_times_rate(self):
        ranges = SeedRanges(n_securities=3, n_days=10, seed=8)
        ts = build_portfolio_dataset(ranges)
        params = dataset_params(ranges)
        for i, p in enumerate(params):
            assert np.allclose(ts.alt_rate[i], p.rate_spread * ts.rate[i],
                               rtol=0, atol=0)

    def test_byte_identical_csv_for_seed(self, tmp_path):
        ranges = SeedRanges(n_securities=4, n_days=9, seed=17)
        a = build_portfolio_dataset(ranges).to_csv_string()
        b = build_portfolio_dataset(ranges).to_csv_string()
        assert a == b

    def test_csv_round_trip_exact(self, tmp_path):
        ranges = SeedRanges(n_securities=5, n_days=12, seed=29)
        ts = build_portfolio_dataset(ranges)
        path = tmp_path / "ds.csv"
        ts.to_csv(path)
        back = PortfolioTimeSeries.from_csv(path)
        for field in ("price", "rate", "alt_rate", "borrow", "locates",
                      "inventory", "holdings", "delta", "external"):
            assert np.array_equal(getattr(ts, field), getattr(back, field)), field

    def test_csv_errors_name_position(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("security_id,day,S,R,Q,B,L,I,H,delta\n0,0,1,0.01,"
                        "0.005,5,0,1,2,oops\n", encoding="utf-8")
        with pytest.raises(ValueError, match="bad.csv:2"):
            PortfolioTimeSeries.from_csv(path)

    def test_csv_header_required(self, tmp_path):
        path = tmp_path / "noheader.csv"
        path.write_text("0,0,1,0.01,0.005,5,0,1,2,0.5\n", encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            PortfolioTimeSeries.from_csv(path)

    def test_correlated_innovations_flag(self):
        ranges = SeedRanges(n_securities=2, n_days=40, seed=4,
                            correlation=0.8)
        ts = build_portfolio_dataset(ranges)
        assert (ts.price > 0).all()
        # high common correlation should show up between borrow and
        # inventory log returns of the same security
        lb = np.diff(np.log(ts.borrow[0]))
        li = np.diff(np.log(ts.inventory[0]))
        assert np.corrcoef(lb, li)[0, 1] > 0.3

    def test_poisson_locates_flag(self):
        ranges = SeedRanges(n_securities=2, n_days=30, seed=4,
                            locate_model="poisson")
        ts = build_portfolio_dataset(ranges)
        assert np.array_equal(ts.locates, np.round(ts.locates))

    def test_with_seed_changes_only_seed(self):
        ranges = SeedRanges(n_securities=2, n_days=5, seed=1)
        other = with_seed(ranges, 2)
        assert other.seed == 2
        assert dataclasses.replace(other, seed=1) == ranges
