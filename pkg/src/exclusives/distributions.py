"""Bidder-value distributions and their order-statistic helpers.

Three families cover the auction settings: uniform on [0, omega],
log-normal (log of the value is N(mu, sigma^2)), and the order-2
Irwin-Hall sum of two standard uniforms with its triangular density on
[0, 2]. The Irwin-Hall family additionally carries the conditional
order-statistic machinery used by the interdependent-value strategies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import normal_cdf


@dataclass(frozen=True)
class Uniform:
    """Uniform value distribution on [0, omega]."""
    omega: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, self.omega)

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x >= self.omega:
            return 1.0
        return x / self.omega

    def pdf(self, x: float) -> float:
        return 1.0 / self.omega if 0.0 <= x <= self.omega else 0.0

    def ppf(self, q: float) -> float:
        return q * self.omega

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(0.0, self.omega, size=size)


@dataclass(frozen=True)
class LogNormal:
    """Log-normal value distribution: ln X ~ N(mu, sigma^2), support (0, inf)."""
    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        return float(normal_cdf((math.log(x) - self.mu) / self.sigma))

    def pdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        z = (math.log(x) - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (x * self.sigma * math.sqrt(2.0 * math.pi))

    def ppf(self, q: float) -> float:
        from scipy.special import ndtri
        return math.exp(self.mu + self.sigma * float(ndtri(q)))

    def quantile_cutoff(self, mass: float = 1e-12) -> float:
        """Upper integration cutoff leaving ``mass`` probability in the tail."""
        return self.ppf(1.0 - mass)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.lognormal(self.mu, self.sigma, size=size)


@dataclass(frozen=True)
class IrwinHall2:
    """Sum of two independent uniform(0,1) values: triangular on [0, 2].

    Models one private signal plus one common component, which is the
    affiliation structure behind the interdependent-value strategies.
    """

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 2.0)

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x >= 2.0:
            return 1.0
        if x < 1.0:
            return 0.5 * x * x
        return 2.0 * x - 1.0 - 0.5 * x * x

    def pdf(self, x: float) -> float:
        if x < 0.0 or x > 2.0:
            return 0.0
        return x if x < 1.0 else 2.0 - x

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(size=size) + rng.uniform(size=size)

    # ---- conditional order statistics of the highest rival signal ------
    #
    # Conditioning the highest of M-1 rival signals on the bidder's own
    # signal x truncates the rivals below x: the conditional CDF is
    # [F(y)/F(x)]^(M-1) and the density follows by differentiation.

    def cond_cdf(self, y: float, x: float, m: int) -> float:
        """P(highest rival <= y | own signal x), for y in [0, x]."""
        if y >= x:
            return 1.0
        if y <= 0.0:
            return 0.0
        return (self.cdf(y) / self.cdf(x)) ** (m - 1)

    def cond_pdf(self, y: float, x: float, m: int) -> float:
        if y < 0.0 or y > x:
            return 0.0
        fx = self.cdf(x)
        return (m - 1) * (self.cdf(y) / fx) ** (m - 2) * self.pdf(y) / fx

    def reverse_hazard(self, t: float, m: int) -> float:
        """g(t|t)/G(t|t): the diagonal reverse hazard rate of the highest rival."""
        if t <= 0.0 or t > 2.0:
            raise ValueError(f"t must lie in (0, 2], got {t}")
        if t < 1.0:
            return (m - 1) * 2.0 / t
        return (m - 1) * (2.0 - t) / (2.0 * t - 1.0 - 0.5 * t * t) if t < 2.0 else 0.0

    def survival_weight(self, y: float, x: float, m: int) -> float:
        """exp(-integral of the diagonal reverse hazard over [y, x]).

        Evaluated in closed form branch by branch; continuous at the
        density kink t = 1 and multiplicative across it.
        """
        if not 0.0 <= y <= x <= 2.0:
            raise ValueError(f"need 0 <= y <= x <= 2, got y={y}, x={x}")
        if y == x:
            return 1.0
        if y == 0.0:
            return 0.0

        def upper_piece(a, b):  # both in [1, 2]
            return (self.cdf(a) / self.cdf(b)) ** (m - 1)

        def lower_piece(a, b):  # both in [0, 1]
            return (a / b) ** (2 * m - 2)

        if x <= 1.0:
            return lower_piece(y, x)
        if y >= 1.0:
            return upper_piece(y, x)
        return lower_piece(y, 1.0) * upper_piece(1.0, x)


ValueDistribution = Uniform | LogNormal | IrwinHall2


def order_cdf(dist, y: float, m: int) -> float:
    """CDF of the highest of m-1 independent draws from ``dist``."""
    return dist.cdf(y) ** (m - 1)


def order_pdf(dist, y: float, m: int) -> float:
    """Density of the highest of m-1 independent draws from ``dist``."""
    return (m - 1) * dist.cdf(y) ** (m - 2) * dist.pdf(y)


def upper_cutoff(dist, tail_mass: float = 1e-12) -> float:
    """Finite upper integration limit for ``dist``.

    Bounded supports return their upper endpoint; the log-normal is cut at
    the 1 - tail_mass quantile.
    """
    hi = dist.support[1]
    if math.isfinite(hi):
        return hi
    return dist.quantile_cutoff(tail_mass)
