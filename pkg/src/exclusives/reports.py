"""Report payloads and plot-data tables for the command-line front end.

Functions here build plain dicts and row lists; the CLI owns file I/O and
formatting. Every payload carries the resolved configuration so a report
can be reproduced from itself. Basis-point displays round half to even at
two decimals; machine-readable fields keep the raw fractions.
"""

from __future__ import annotations

import math

import numpy as np

from . import auctions
from .distributions import Uniform
from .simulate import PortfolioTimeSeries
from .valuation import (ValuationParams, combine_variance_weighted,
                        daily_pnl, value, valuation_set)

BETA_SWEEP = (1.00, 0.99, 0.98, 0.97, 0.96, 0.95)


def bps(fraction: float) -> float:
    """Display rounding: basis points, two decimals, half to even."""
    return round(fraction * 1e4, 2)


def valuation_report(ts: PortfolioTimeSeries, params: ValuationParams,
                     config: dict) -> dict:
    """Full valuation payload: ladder, combination, sweep, daily series."""
    vset = valuation_set(ts, params)
    combined = combine_variance_weighted(
        [(vset.values[name], max(vset.variances[name], 1e-30))
         for name in vset.values])
    sweep = beta_sweep(ts, params)
    payment = daily_pnl(ts, params, paid_fee=vset.values["beta"])
    return {
        "config": config,
        "valuations": {
            name: {
                "annualized_fraction": vset.values[name],
                "basis_points": bps(vset.values[name]),
                "variance": vset.variances[name],
            } for name in vset.values
        },
        "combined": {
            "annualized_fraction": combined.value,
            "basis_points": bps(combined.value),
            "weights": list(combined.weights),
            "k": combined.k,
        },
        "pecking_order_ok": vset.pecking_order_ok,
        "diagnostics": {
            "transaction_cost_total": vset.transaction_cost_total,
            "transaction_negative": vset.values["transaction"] < 0.0,
            "break_even_pnl_volatility": payment.volatility,
        },
        "beta_sweep": sweep,
        "daily_series": {name: [float(v) for v in series]
                         for name, series in vset.daily.items()},
    }


def beta_sweep(ts: PortfolioTimeSeries, params: ValuationParams,
               betas=BETA_SWEEP) -> list[dict]:
    """Discounted valuation at each beta; lower beta weights early days more."""
    rows = []
    for b in betas:
        p = ValuationParams(discount_beta=b,
                            transaction_cost=params.transaction_cost,
                            delta_override=params.delta_override,
                            window=params.window)
        rows.append({"beta": b, "value_zero": value(ts, p, "zero")})
    return rows


def _bid_row(setting: str, x: float, m, fn, **extra) -> dict:
    row = {"setting": setting, "m": m, "x": x, **extra}
    try:
        bid = fn()
    except auctions.BelowReserveError:
        row.update(bid=None, note="below_reserve")
    except auctions.BelowScreeningError:
        row.update(bid=None, note="below_screening")
    except auctions.NoParticipationError:
        row.update(bid=None, note="no_participation")
    else:
        row.update(bid=bid, bid_basis_points=bps(bid), note="")
    return row


def bid_report(x: float, *, m_list=(2, 5, 10), m: int = 5, omega: float = 1.0,
               reserve: float = 0.0, mu: float | None = None,
               sigma: float = 0.5, alpha: float = 0.5, xi: float = 0.5,
               signal: float = 1.5, config: dict | None = None) -> dict:
    """Bid table across every auction setting at valuation ``x``.

    Private-value rows quote bids in valuation units. The interdependent
    rows live in affiliated-signal space on [0, 2] (``signal``); their
    bids are fractions of the signal, not of the valuation.
    """
    if x <= 0:
        raise ValueError("valuation x must be positive")
    log_mu = math.log(x) if mu is None else mu
    rows = []
    for count in m_list:
        rows.append(_bid_row("uniform", x, count,
                             lambda c=count: auctions.bid_uniform(x, c, omega)))
    rows.append(_bid_row("lognormal_approx", x, m,
                         lambda: auctions.bid_lognormal(x, log_mu, sigma, m,
                                                        "approx")))
    rows.append(_bid_row("lognormal_numeric", x, m,
                         lambda: auctions.bid_lognormal(x, log_mu, sigma, m,
                                                        "numeric")))
    if reserve > 0.0:
        rows.append(_bid_row(
            "reserve_uniform", x, m,
            lambda: auctions.bid_reserve_uniform(x, reserve, m, omega),
            reserve=reserve))
        rows.append(_bid_row(
            "reserve_lognormal_numeric", x, m,
            lambda: auctions.bid_reserve_lognormal(x, reserve, log_mu, sigma,
                                                   m, "numeric"),
            reserve=reserve))
    rows.append(_bid_row(
        "variable_bidders_uniform", x, m,
        lambda: auctions.bid_variable_bidders_uniform(x, m, omega)))
    rows.append(_bid_row(
        "interdependent", signal, m,
        lambda: auctions.bid_interdependent_irwin_hall(signal, m, alpha, xi),
        alpha=alpha, xi=xi, domain="signal[0,2]"))
    rows.append(_bid_row(
        "combined_realistic", signal, m,
        lambda: auctions.bid_combined_realistic(signal, reserve, m, alpha, xi),
        alpha=alpha, xi=xi, reserve=reserve, domain="signal[0,2]"))
    rows.append(_bid_row(
        "combined_uncertain_bidders", signal, m,
        lambda: auctions.bid_combined_uncertain_bidders(signal, reserve, m,
                                                        alpha, xi),
        alpha=alpha, xi=xi, reserve=reserve, domain="signal[0,2]"))
    return {"config": config or {}, "x": x, "rows": rows}


def bid_vs_m_table(x: float, *, omega: float = 1.0, mu: float | None = None,
                   sigma: float = 0.5, m_range=range(2, 11)) -> list[dict]:
    """Comparative statics of the bid in the number of bidders."""
    log_mu = math.log(x) if mu is None else mu
    rows = []
    for m in m_range:
        rows.append({
            "m": m,
            "uniform": auctions.bid_uniform(x, m, omega),
            "lognormal_numeric": auctions.bid_lognormal(x, log_mu, sigma, m,
                                                        "numeric"),
            "lognormal_approx": auctions.bid_lognormal(x, log_mu, sigma, m,
                                                       "approx"),
            "variable_bidders_uniform":
                auctions.bid_variable_bidders_uniform(x, m, omega),
        })
    return rows


def bid_curve_table(m: int, *, omega: float = 1.0, reserve: float = 0.0,
                    n_points: int = 101) -> list[dict]:
    """Uniform-value bid curve over the signal grid, with FOC residuals."""
    curve = auctions.symmetric_bid_curve(Uniform(omega), m,
                                         reserve=reserve, n_points=n_points)
    return [{"x": float(s), "bid": float(b), "foc_residual": float(r)}
            for s, b, r in zip(curve.signals, curve.bids, curve.foc_residuals)]


def simulation_summary(params_list) -> list[dict]:
    """Min/mean/max of each drawn parameter across securities."""
    names = ["mu_price", "sigma_price", "mu_rate", "sigma_rate", "mu_borrow",
             "sigma_borrow", "mu_inventory", "sigma_inventory", "mu_holding",
             "sigma_holding", "locate_mean", "locate_std", "delta",
             "rate_spread"]
    rows = []
    for name in names:
        vals = np.array([getattr(p, name) for p in params_list])
        rows.append({"parameter": name, "min": float(vals.min()),
                     "mean": float(vals.mean()), "max": float(vals.max())})
    return rows
