import numpy as np
import pytest

from exclusives.simulate import PortfolioTimeSeries, SeedRanges, \
    build_portfolio_dataset


def make_ts(borrow, inventory, *, locates=None, holdings=None, price=None,
            rate=None, spread=0.5, delta=None):
    """Hand-built dataset from (n_securities, n_days) arrays or nested lists."""
    borrow = np.atleast_2d(np.asarray(borrow, dtype=float))
    inventory = np.atleast_2d(np.asarray(inventory, dtype=float))
    shape = borrow.shape

    def fill(value, default):
        if value is None:
            return np.full(shape, default)
        return np.atleast_2d(np.asarray(value, dtype=float))

    locates = fill(locates, 0.0)
    holdings = fill(holdings, 100.0)
    price = fill(price, 10.0)
    rate = fill(rate, 0.02)
    if delta is None:
        delta = np.full(shape[0], 1.0)
    else:
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
    return PortfolioTimeSeries(price=price, rate=rate,
                               alt_rate=spread * rate, borrow=borrow,
                               locates=locates, inventory=inventory,
                               holdings=holdings, delta=delta)


@pytest.fixture(scope="session")
def small_dataset():
    """Shared 20x60 simulated dataset, fixed seed."""
    return build_portfolio_dataset(
        SeedRanges(n_securities=20, n_days=60, seed=11))
