"""Valuation ladder for an exclusive lending portfolio.

Every variant prices the same object: the revenue the desk can pull out of
the exclusive pool relative to the fee base. The daily take is
min[H, max(B + delta*L - I, 0)] shares per security; variants differ in the
discounting, the rate applied (loan rate R or alternate rate Q), whether
locates count toward demand (delta = 0 for the conservative tiers), and
whether state-change transaction costs are netted out. Rates and valuations
are annualized fractions throughout, so the daily accrual factor cancels
between numerator and denominator and only the P&L applies 1/252
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simulate import TRADING_DAYS, PortfolioTimeSeries

VALUATION_NAMES = ("zero", "beta", "beta_alternate", "transaction",
                   "conservative", "alternate", "historical")


class DegeneratePortfolioError(ValueError):
    """The fee base (sum of holdings value) is zero over the window."""


@dataclass(frozen=True)
class ValuationParams:
    discount_beta: float = 1.0
    transaction_cost: float = 0.0       # currency per state change per security
    delta_override: float | None = None
    window: tuple[int, int] | None = None   # inclusive day range

    def __post_init__(self):
        if not 0.0 < self.discount_beta <= 1.0:
            raise ValueError("discount_beta must lie in (0, 1]")
        if self.transaction_cost < 0:
            raise ValueError("transaction_cost must be nonnegative")
        if self.delta_override is not None and not 0.0 <= self.delta_override <= 1.0:
            raise ValueError("delta_override must lie in [0, 1]")
        if self.window is not None:
            lo, hi = self.window
            if lo < 0 or hi < lo:
                raise ValueError(f"invalid window {self.window}")


@dataclass(frozen=True)
class ValuationSet:
    values: dict[str, float]            # annualized fractions, keyed by name
    daily: dict[str, np.ndarray]        # per-day valuation series
    variances: dict[str, float]         # sample variance of each daily series
    pecking_order_ok: bool
    transaction_cost_total: float

    def basis_points(self, name: str) -> float:
        return self.values[name] * 1e4


@dataclass(frozen=True)
class CombinedValuation:
    value: float
    weights: tuple[float, ...]          # relative weight per input series
    k: int


@dataclass(frozen=True)
class DailyPnl:
    series: np.ndarray                  # currency per day
    volatility: float                   # sample stdev of the series


def max_take(borrow, locates, inventory, holdings, delta):
    """Shares takeable from the pool: min[H, max(B + delta*L - I, 0)].

    Accepts scalars or broadcastable arrays.
    """
    if np.any(np.asarray(holdings) < 0):
        raise ValueError("holdings must be nonnegative")
    demand = np.asarray(borrow) + np.asarray(delta) * np.asarray(locates) \
        - np.asarray(inventory)
    out = np.minimum(holdings, np.maximum(demand, 0.0))
    return float(out) if np.isscalar(holdings) and out.ndim == 0 else out


def _window_slice(ts: PortfolioTimeSeries,
                  window: tuple[int, int] | None) -> slice:
    if window is None:
        return slice(0, ts.n_days)
    lo, hi = window
    if hi >= ts.n_days:
        raise ValueError(f"window {window} exceeds dataset with {ts.n_days} days")
    return slice(lo, hi + 1)


def _state_indicators(excess: np.ndarray):
    """Take/Give indicators per security and day; both zero at excess == 0."""
    return (excess > 0).astype(float), (excess < 0).astype(float)


def _daily_transaction_costs(ts: PortfolioTimeSeries, cost: float,
                             delta_override: float | None,
                             window: tuple[int, int] | None) -> np.ndarray:
    sl = _window_slice(ts, window)
    excess = ts.excess_demand(delta_override)[:, sl]
    take, give = _state_indicators(excess)
    daily = np.zeros(excess.shape[1])
    daily[0] = cost * take[:, 0].sum()
    if excess.shape[1] > 1:
        flips = np.abs(np.diff(take, axis=1) - np.diff(give, axis=1))
        daily[1:] = 0.5 * cost * flips.sum(axis=0)
    return daily


def transaction_costs(ts: PortfolioTimeSeries, cost: float,
                      delta_override: float | None = None,
                      window: tuple[int, int] | None = None) -> float:
    """Total state-change cost: c for an opening Take, c per Take/Give flip.

    A pass through the neutral state (excess demand exactly zero) splits a
    flip into two half-cost transitions.
    """
    if cost < 0:
        raise ValueError("cost must be nonnegative")
    return float(_daily_transaction_costs(ts, cost, delta_override, window).sum())


# mode -> (force delta to zero, use alternate rate, discounted, subtract TC)
_MODES = {
    "zero": (False, False, True, False),
    "beta": (False, False, False, False),
    "transaction": (False, False, False, True),
    "conservative": (True, False, False, False),
    "beta_alternate": (False, True, False, False),
    "alternate": (True, True, False, False),
    "historical": (False, False, False, False),
}


def _mode_components(ts: PortfolioTimeSeries, params: ValuationParams,
                     mode: str):
    """Per-day numerator and fee-base series for ``mode`` over the window."""
    try:
        zero_delta, use_alt, discounted, subtract_tc = _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown valuation mode {mode!r}") from None
    sl = _window_slice(ts, params.window)
    delta = 0.0 if zero_delta else params.delta_override
    take = max_take(ts.borrow[:, sl],
                    ts.locates[:, sl],
                    ts.inventory[:, sl],
                    ts.holdings[:, sl],
                    ts.delta[:, None] if delta is None else delta)
    rate = (ts.alt_rate if use_alt else ts.rate)[:, sl]
    numer = (take * ts.price[:, sl] * rate).sum(axis=0)
    base = (ts.holdings[:, sl] * ts.price[:, sl]).sum(axis=0)
    if subtract_tc:
        numer = numer - _daily_transaction_costs(
            ts, params.transaction_cost, params.delta_override, params.window)
    weights = (np.power(params.discount_beta, np.arange(numer.size))
               if discounted else np.ones(numer.size))
    return numer, base, weights


def value(ts: PortfolioTimeSeries, params: ValuationParams, mode: str) -> float:
    """One valuation variant as an annualized fraction of portfolio value."""
    numer, base, weights = _mode_components(ts, params, mode)
    denom = float(weights @ base)
    if denom <= 0.0:
        raise DegeneratePortfolioError(
            "holdings value sums to zero over the window")
    return float(weights @ numer) / denom


def daily_value_series(ts: PortfolioTimeSeries, params: ValuationParams,
                       mode: str) -> np.ndarray:
    """Per-day valuation snapshots (day-level numerator over day-level base)."""
    numer, base, _ = _mode_components(ts, params, mode)
    if (base <= 0.0).any():
        raise DegeneratePortfolioError("a day has zero holdings value")
    return numer / base


def valuation_set(ts: PortfolioTimeSeries, params: ValuationParams) -> ValuationSet:
    """All seven valuation variants with daily series and variances.

    ``historical`` reuses the undiscounted formula on the configured
    window; feed a distinct window to obtain an out-of-sample estimate.
    """
    values, daily, variances = {}, {}, {}
    for name in VALUATION_NAMES:
        values[name] = value(ts, params, name)
        series = daily_value_series(ts, params, name)
        daily[name] = series
        variances[name] = float(np.var(series, ddof=1)) if series.size > 1 else 0.0
    ok = (values["beta"] >= values["conservative"] >= values["alternate"]
          and values["beta"] >= values["beta_alternate"] >= values["alternate"]
          and values["transaction"] <= values["beta"])
    tc = transaction_costs(ts, params.transaction_cost, params.delta_override,
                           params.window)
    return ValuationSet(values=values, daily=daily, variances=variances,
                        pecking_order_ok=bool(ok), transaction_cost_total=tc)


def combine_variance_weighted(values: list[tuple[float, float]]) -> CombinedValuation:
    """Variance-weighted combination of valuation series.

    Each input is (value, variance). Series i receives relative weight
    (sum of the other variances) / (k * total variance), so noisier series
    contribute less; the weights intentionally sum to (k-1)/k, which is the
    finite-k bias of the scheme and vanishes as k grows.
    """
    k = len(values)
    if k < 2:
        raise ValueError(f"need at least two series, got {k}")
    vals = np.array([v for v, _ in values], dtype=float)
    variances = np.array([s for _, s in values], dtype=float)
    if not np.isfinite(variances).all() or (variances <= 0).any():
        raise ValueError("all variances must be positive and finite")
    total = variances.sum()
    weights = (total - variances) / (k * total)
    return CombinedValuation(value=float(weights @ vals),
                             weights=tuple(float(w) for w in weights), k=k)


def daily_pnl(ts: PortfolioTimeSeries, params: ValuationParams,
              paid_fee: float) -> DailyPnl:
    """Daily profit: take revenue minus the fee paid on the holdings base.

    ``paid_fee`` is an annualized fraction (the winning bid); revenue and
    fee accrue at 1/252 per day.
    """
    sl = _window_slice(ts, params.window)
    take = max_take(ts.borrow[:, sl], ts.locates[:, sl], ts.inventory[:, sl],
                    ts.holdings[:, sl],
                    ts.delta[:, None] if params.delta_override is None
                    else params.delta_override)
    revenue = (take * ts.price[:, sl] * ts.rate[:, sl]).sum(axis=0)
    base = (ts.holdings[:, sl] * ts.price[:, sl]).sum(axis=0)
    series = (revenue - paid_fee * base) / TRADING_DAYS
    vol = float(np.std(series, ddof=1)) if series.size > 1 else 0.0
    return DailyPnl(series=series, volatility=vol)
