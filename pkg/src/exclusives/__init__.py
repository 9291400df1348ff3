"""Securities-lending exclusive auctions: portfolio valuation and bidding.

The package splits into a simulation engine for desk time series
(:mod:`exclusives.simulate`), the valuation ladder and its
variance-weighted combination (:mod:`exclusives.valuation`), equilibrium
bid functions for the auction settings (:mod:`exclusives.auctions`) with
their value distributions (:mod:`exclusives.distributions`), a small
numerical kernel (:mod:`exclusives.numerics`) and a CLI front end
(:mod:`exclusives.cli`).
"""

from .simulate import (SecurityPathParams, SeedRanges, PortfolioTimeSeries,
                       build_portfolio_dataset, draw_security_params,
                       simulate_gbm_path, simulate_locates)
from .valuation import (ValuationParams, ValuationSet, CombinedValuation,
                        DailyPnl, combine_variance_weighted, daily_pnl,
                        max_take, transaction_costs, valuation_set, value)
from .distributions import IrwinHall2, LogNormal, Uniform
from . import auctions, numerics

__all__ = [
    "SecurityPathParams", "SeedRanges", "PortfolioTimeSeries",
    "build_portfolio_dataset", "draw_security_params", "simulate_gbm_path",
    "simulate_locates", "ValuationParams", "ValuationSet",
    "CombinedValuation", "DailyPnl", "combine_variance_weighted",
    "daily_pnl", "max_take", "transaction_costs", "valuation_set", "value",
    "IrwinHall2", "LogNormal", "Uniform", "auctions", "numerics",
]
