"""Synthetic portfolio histories for a lending desk.

Generates, per security, daily series of price, loan rate, alternate rate,
borrow book, locate requests, internal inventory and exclusive-pool
holdings. Prices, rates and share quantities follow geometric Brownian
motion (exact log-Euler steps, 252 trading days per year); locates are
absolute-normal draws by default with a Poisson option. Per-security
drift/volatility parameters are themselves drawn from configured uniform
ranges, so a single master seed pins down the whole dataset.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields, replace

import numpy as np

TRADING_DAYS = 252

CSV_COLUMNS = ["security_id", "day", "S", "R", "Q", "B", "L", "I", "H", "delta"]


@dataclass(frozen=True)
class SecurityPathParams:
    """Per-security process parameters (drifts/vols are per annum)."""
    mu_price: float
    sigma_price: float
    mu_rate: float
    sigma_rate: float
    mu_borrow: float
    sigma_borrow: float
    mu_inventory: float
    sigma_inventory: float
    mu_holding: float
    sigma_holding: float
    locate_mean: float
    locate_std: float
    delta: float            # locate-to-borrow conversion
    rate_spread: float      # q in Q_t = q * R_t, so Q <= R
    price_0: float
    rate_0: float
    borrow_0: float
    inventory_0: float
    holding_0: float

    def __post_init__(self):
        for name in ("sigma_price", "sigma_rate", "sigma_borrow",
                     "sigma_inventory", "sigma_holding", "locate_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if not 0.0 <= self.rate_spread <= 1.0:
            raise ValueError(f"rate_spread must lie in [0, 1], got {self.rate_spread}")
        if self.price_0 <= 0 or self.rate_0 <= 0:
            raise ValueError("price_0 and rate_0 must be positive")
        if min(self.borrow_0, self.inventory_0, self.holding_0) < 0:
            raise ValueError("share quantities must be nonnegative")


Interval = tuple[float, float]


@dataclass(frozen=True)
class SeedRanges:
    """Uniform sampling intervals for every path parameter, plus run shape.

    Defaults put price and rate volatility well below the volatility of the
    share-quantity processes (borrow most volatile, inventory next,
    exclusive holdings least) and give the quantity drifts the wider range,
    mirroring how these series behave on a real desk.
    """
    price_drift: Interval = (-0.10, 0.10)
    price_vol: Interval = (0.10, 0.40)
    rate_drift: Interval = (-0.10, 0.10)
    rate_vol: Interval = (0.10, 0.50)
    borrow_drift: Interval = (-0.75, 0.75)
    borrow_vol: Interval = (1.00, 3.00)
    inventory_drift: Interval = (-0.75, 0.75)
    inventory_vol: Interval = (0.75, 2.00)
    holding_drift: Interval = (-0.50, 0.50)
    holding_vol: Interval = (0.50, 1.50)
    locate_mean: Interval = (0.0, 20_000.0)
    locate_std: Interval = (0.0, 10_000.0)
    delta: Interval = (0.25, 0.75)
    rate_spread: Interval = (0.40, 0.90)
    price_init: Interval = (5.0, 100.0)
    rate_init: Interval = (0.0040, 0.0250)
    borrow_init: Interval = (10_000.0, 100_000.0)
    inventory_init: Interval = (5_000.0, 100_000.0)
    holding_init: Interval = (10_000.0, 100_000.0)
    n_securities: int = 100
    n_days: int = TRADING_DAYS
    discount_beta: float = 1.0
    transaction_cost: float = 0.0
    locate_model: str = "absnormal"     # or "poisson"
    correlation: float | None = None    # innovation correlation across a
                                        # security's GBM variables
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                lo, hi = value
                if lo > hi:
                    raise ValueError(f"{f.name}: interval lower {lo} > upper {hi}")
        if self.n_securities < 1:
            raise ValueError("n_securities must be >= 1")
        if self.n_days < 1:
            raise ValueError("n_days must be >= 1")
        if not 0.0 < self.discount_beta <= 1.0:
            raise ValueError("discount_beta must lie in (0, 1]")
        if self.transaction_cost < 0:
            raise ValueError("transaction_cost must be nonnegative")
        if self.locate_model not in ("absnormal", "poisson"):
            raise ValueError(f"unknown locate_model {self.locate_model!r}")
        if self.correlation is not None and not -0.2 <= self.correlation < 1.0:
            raise ValueError("correlation must lie in [-0.2, 1.0)")


@dataclass(frozen=True)
class PortfolioTimeSeries:
    """Daily series per security; all arrays have shape (n_securities, n_days).

    ``external`` is the residual demand met from other beneficial owners:
    max(B + delta*L - I - H, 0), reported but never fed back into the paths.
    """
    price: np.ndarray       # S
    rate: np.ndarray        # R, annualized fraction
    alt_rate: np.ndarray    # Q = rate_spread * R
    borrow: np.ndarray      # B, shares
    locates: np.ndarray     # L, shares
    inventory: np.ndarray   # I, shares
    holdings: np.ndarray    # H, shares
    delta: np.ndarray       # per-security conversion, shape (n_securities,)
    external: np.ndarray = field(init=False)  # O, derived

    def __post_init__(self):
        arrays = (self.price, self.rate, self.alt_rate, self.borrow,
                  self.locates, self.inventory, self.holdings)
        shape = self.price.shape
        if len(shape) != 2:
            raise ValueError("series arrays must be 2-D (security, day)")
        if any(a.shape != shape for a in arrays):
            raise ValueError("all series arrays must share one shape")
        if self.delta.shape != (shape[0],):
            raise ValueError("delta must have one entry per security")
        for name, arr in (("price", self.price), ("rate", self.rate),
                          ("borrow", self.borrow), ("inventory", self.inventory),
                          ("holdings", self.holdings)):
            if not (arr > 0).all():
                raise ValueError(f"{name} series must be strictly positive")
        if (self.locates < 0).any():
            raise ValueError("locates must be nonnegative")
        if (self.alt_rate > self.rate + 1e-15).any():
            raise ValueError("alternate rate must not exceed the loan rate")
        demand = self.borrow + self.delta[:, None] * self.locates
        object.__setattr__(
            self, "external",
            np.maximum(demand - self.inventory - self.holdings, 0.0))

    @property
    def n_securities(self) -> int:
        return self.price.shape[0]

    @property
    def n_days(self) -> int:
        return self.price.shape[1]

    def excess_demand(self, delta_override: float | None = None) -> np.ndarray:
        """B + delta*L - I per security and day."""
        d = self.delta[:, None] if delta_override is None else delta_override
        return self.borrow + d * self.locates - self.inventory

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            self._write_csv(fh)

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()

    def _write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for i in range(self.n_securities):
            d = repr(float(self.delta[i]))
            for t in range(self.n_days):
                writer.writerow([
                    i, t,
                    repr(float(self.price[i, t])),
                    repr(float(self.rate[i, t])),
                    repr(float(self.alt_rate[i, t])),
                    repr(float(self.borrow[i, t])),
                    repr(float(self.locates[i, t])),
                    repr(float(self.inventory[i, t])),
                    repr(float(self.holdings[i, t])),
                    d,
                ])

    @classmethod
    def from_csv(cls, path) -> "PortfolioTimeSeries":
        with open(path, newline="", encoding="utf-8") as fh:
            return cls._read_csv(fh, str(path))

    @classmethod
    def from_csv_string(cls, text: str) -> "PortfolioTimeSeries":
        return cls._read_csv(io.StringIO(text), "<string>")

    @classmethod
    def _read_csv(cls, fh, source: str) -> "PortfolioTimeSeries":
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise ValueError(
                f"{source}: expected header {CSV_COLUMNS}, got {header}")
        rows: dict[tuple[int, int], list[float]] = {}
        deltas: dict[int, float] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_COLUMNS):
                raise ValueError(
                    f"{source}:{lineno}: expected {len(CSV_COLUMNS)} columns, "
                    f"got {len(row)}")
            try:
                sec, day = int(row[0]), int(row[1])
                values = [float(v) for v in row[2:9]]
                delta = float(row[9])
            except ValueError as exc:
                raise ValueError(f"{source}:{lineno}: {exc}") from None
            rows[(sec, day)] = values
            deltas[sec] = delta
        if not rows:
            raise ValueError(f"{source}: no data rows")
        n_sec = max(sec for sec, _ in rows) + 1
        n_day = max(day for _, day in rows) + 1
        if len(rows) != n_sec * n_day:
            raise ValueError(
                f"{source}: expected {n_sec * n_day} rows for a full "
                f"{n_sec}x{n_day} grid, got {len(rows)}")
        series = np.empty((7, n_sec, n_day))
        for (sec, day), values in rows.items():
            series[:, sec, day] = values
        delta_arr = np.array([deltas[i] for i in range(n_sec)])
        return cls(price=series[0], rate=series[1], alt_rate=series[2],
                   borrow=series[3], locates=series[4], inventory=series[5],
                   holdings=series[6], delta=delta_arr)


def simulate_gbm_path(x0: float, mu: float, sigma: float, n_days: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Exact log-Euler geometric Brownian motion path of length ``n_days``.

    Step rule: x_{t+1} = x_t * exp((mu - sigma^2/2) dt + sigma sqrt(dt) z),
    dt = 1/252. The first entry is ``x0``.
    """
    if x0 <= 0:
        raise ValueError(f"x0 must be positive, got {x0}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if n_days < 1:
        raise ValueError(f"n_days must be >= 1, got {n_days}")
    dt = 1.0 / TRADING_DAYS
    z = rng.standard_normal(n_days - 1)
    increments = (mu - 0.5 * sigma * sigma) * dt + sigma * np.sqrt(dt) * z
    path = np.empty(n_days)
    path[0] = x0
    np.multiply(x0, np.exp(np.cumsum(increments)), out=path[1:])
    return path


def simulate_locates(mu_l: float, sigma_l: float, n_days: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Daily locate requests: absolute value of N(mu_l, sigma_l^2) draws."""
    if sigma_l < 0:
        raise ValueError(f"sigma_l must be nonnegative, got {sigma_l}")
    if n_days < 1:
        raise ValueError(f"n_days must be >= 1, got {n_days}")
    return np.abs(rng.normal(mu_l, sigma_l, size=n_days))


def simulate_locates_poisson(lam: float, n_days: int,
                             rng: np.random.Generator) -> np.ndarray:
    """Poisson(lam) variant of the locate process."""
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    return rng.poisson(lam, size=n_days).astype(float)


def _uniform(rng: np.random.Generator, interval: Interval) -> float:
    lo, hi = interval
    return float(rng.uniform(lo, hi)) if lo < hi else float(lo)


def draw_security_params(ranges: SeedRanges,
                         rng: np.random.Generator | None = None
                         ) -> list[SecurityPathParams]:
    """Draw one parameter set per security, each field uniform in its range."""
    if rng is None:
        rng = np.random.default_rng(ranges.seed)
    params = []
    for _ in range(ranges.n_securities):
        params.append(SecurityPathParams(
            mu_price=_uniform(rng, ranges.price_drift),
            sigma_price=_uniform(rng, ranges.price_vol),
            mu_rate=_uniform(rng, ranges.rate_drift),
            sigma_rate=_uniform(rng, ranges.rate_vol),
            mu_borrow=_uniform(rng, ranges.borrow_drift),
            sigma_borrow=_uniform(rng, ranges.borrow_vol),
            mu_inventory=_uniform(rng, ranges.inventory_drift),
            sigma_inventory=_uniform(rng, ranges.inventory_vol),
            mu_holding=_uniform(rng, ranges.holding_drift),
            sigma_holding=_uniform(rng, ranges.holding_vol),
            locate_mean=_uniform(rng, ranges.locate_mean),
            locate_std=_uniform(rng, ranges.locate_std),
            delta=_uniform(rng, ranges.delta),
            rate_spread=_uniform(rng, ranges.rate_spread),
            price_0=_uniform(rng, ranges.price_init),
            rate_0=_uniform(rng, ranges.rate_init),
            borrow_0=_uniform(rng, ranges.borrow_init),
            inventory_0=_uniform(rng, ranges.inventory_init),
            holding_0=_uniform(rng, ranges.holding_init),
        ))
    return params


# column order of the correlated innovation block
_GBM_VARS = ("price", "rate", "borrow", "inventory", "holding")


def _security_paths(p: SecurityPathParams, n_days: int, locate_model: str,
                    correlation: float | None, rng: np.random.Generator):
    """Simulate one security; returns the seven series stacked in CSV order."""
    dt = 1.0 / TRADING_DAYS
    if correlation is None:
        series = {
            name: simulate_gbm_path(
                getattr(p, f"{name}_0"), getattr(p, f"mu_{name}"),
                getattr(p, f"sigma_{name}"), n_days, rng)
            for name in _GBM_VARS
        }
    else:
        corr = np.full((5, 5), correlation)
        np.fill_diagonal(corr, 1.0)
        chol = np.linalg.cholesky(corr)
        z = rng.standard_normal((n_days - 1, 5)) @ chol.T
        series = {}
        for j, name in enumerate(_GBM_VARS):
            mu = getattr(p, f"mu_{name}")
            sigma = getattr(p, f"sigma_{name}")
            increments = (mu - 0.5 * sigma**2) * dt + sigma * np.sqrt(dt) * z[:, j]
            path = np.empty(n_days)
            path[0] = getattr(p, f"{name}_0")
            path[1:] = path[0] * np.exp(np.cumsum(increments))
            series[name] = path
    if locate_model == "poisson":
        locates = simulate_locates_poisson(p.locate_mean, n_days, rng)
    else:
        locates = simulate_locates(p.locate_mean, p.locate_std, n_days, rng)
    rate = series["rate"]
    return (series["price"], rate, p.rate_spread * rate, series["borrow"],
            locates, series["inventory"], series["holding"])


def _master_streams(ranges: SeedRanges):
    """Independent child streams off the master seed: one for parameter
    draws, one per security's paths."""
    children = np.random.SeedSequence(ranges.seed).spawn(ranges.n_securities + 1)
    return (np.random.default_rng(children[0]),
            [np.random.default_rng(c) for c in children[1:]])


def dataset_params(ranges: SeedRanges) -> list[SecurityPathParams]:
    """The exact parameter draws ``build_portfolio_dataset`` will use."""
    param_rng, _ = _master_streams(ranges)
    return draw_security_params(ranges, param_rng)


def build_portfolio_dataset(ranges: SeedRanges,
                            rng: np.random.Generator | None = None
                            ) -> PortfolioTimeSeries:
    """Simulate the full portfolio history described by ``ranges``.

    Parameter draws and every security's paths consume independent child
    streams spawned from the master seed, so results do not depend on
    generation order.
    """
    if rng is None:
        param_rng, path_rngs = _master_streams(ranges)
    else:
        param_rng = rng
        path_rngs = [rng] * ranges.n_securities

    params = draw_security_params(ranges, param_rng)
    n, n_days = ranges.n_securities, ranges.n_days
    out = {name: np.empty((n, n_days)) for name in
           ("price", "rate", "alt_rate", "borrow", "locates", "inventory",
            "holdings")}
    for i, p in enumerate(params):
        (out["price"][i], out["rate"][i], out["alt_rate"][i], out["borrow"][i],
         out["locates"][i], out["inventory"][i], out["holdings"][i]) = \
            _security_paths(p, n_days, ranges.locate_model,
                            ranges.correlation, path_rngs[i])
    delta = np.array([p.delta for p in params])
    return PortfolioTimeSeries(delta=delta, **out)


def with_seed(ranges: SeedRanges, seed: int) -> SeedRanges:
    """Copy of ``ranges`` with a different master seed."""
    return replace(ranges, seed=seed)
