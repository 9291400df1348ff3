"""Equilibrium bid functions for first-price sealed-bid exclusive auctions.

Settings covered, each with its own entry point:

* symmetric independent private values, general / uniform / log-normal;
* reserve prices (general quadrature, uniform closed form, log-normal
  numeric and first-order forms) and the seller's optimal reserve;
* uncertainty about the number of rivals, with a symmetric triangular
  prior over the bidder count;
* asymmetric values in two groups, solved as a coupled inverse-bid ODE
  system by backward shooting;
* interdependent values whose affiliation comes from a shared uniform
  component (order-2 Irwin-Hall signals), with and without a reserve, and
  composed with bidder-count uncertainty.

Bids never exceed the bidder's valuation proxy and are non-decreasing in
the signal; each function raises a specific signal when the signal falls
below the reserve or the screening level rather than returning a bid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (IrwinHall2, LogNormal, Uniform, order_cdf,
                            order_pdf, upper_cutoff)
from .numerics import ConvergenceError, find_root, normal_cdf, quadrature, shoot_bvp


class BelowReserveError(ValueError):
    """Signal below the reserve price: the bidder abstains."""


class BelowScreeningError(ValueError):
    """Signal below the screening level of an interdependent auction."""


class NoParticipationError(ValueError):
    """No signal clears the reserve: the auction attracts nobody."""


@dataclass(frozen=True)
class BidContext:
    """Auction parameters shared by the report/CLI layer."""
    m: int
    reserve: float = 0.0
    beliefs: tuple[float, ...] | None = None
    alpha: float = 0.5
    xi: float = 0.5
    seller_value: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one bidder")
        if self.reserve < 0:
            raise ValueError("reserve must be nonnegative")
        if self.beliefs is not None:
            total = sum(self.beliefs)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"beliefs must sum to 1, got {total}")
        for name in ("alpha", "xi"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.seller_value < 0:
            raise ValueError("seller_value must be nonnegative")


@dataclass(frozen=True)
class BidCurve:
    """Tabulated strategy with first-order-condition diagnostics."""
    signals: np.ndarray
    bids: np.ndarray
    foc_residuals: np.ndarray
    boundary_value: float       # beta at the lowest tabulated signal
    boundary_target: float      # 0 without a reserve, r with one


# --------------------------------------------------------------------------
# symmetric independent private values


def _check_signal(x: float, dist, m: int) -> None:
    lo, hi = dist.support
    if not lo <= x <= hi:
        raise ValueError(f"signal {x} outside support [{lo}, {hi}]")
    if m < 2:
        raise ValueError("symmetric setting needs at least two bidders")


def bid_symmetric_general(x: float, dist, m: int) -> float:
    """Equilibrium bid x - integral of [F(y)/F(x)]^(m-1) over [0, x].

    Equals the expected highest rival signal conditional on winning.
    """
    _check_signal(x, dist, m)
    fx = dist.cdf(x)
    if fx <= 0.0:
        return 0.0
    shading = quadrature(lambda y: (dist.cdf(y) / fx) ** (m - 1),
                         dist.support[0], x).value
    return x - shading


def bid_uniform(x: float, m: int, omega: float = 1.0) -> float:
    """Closed form for uniform values: scale the signal by (m-1)/m."""
    _check_signal(x, Uniform(omega), m)
    return (m - 1) / m * x


def bid_lognormal(x: float, mu: float, sigma: float, m: int,
                  method: str = "approx") -> float:
    """Log-normal values: ``approx`` is the small-signal half-signal rule
    (independent of the bidder count), ``numeric`` integrates the general
    form."""
    if method == "approx":
        if m < 2:
            raise ValueError("need at least two bidders")
        return 0.5 * x if x > 0.0 else 0.0
    if method == "numeric":
        return bid_symmetric_general(x, LogNormal(mu, sigma), m)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# reserve prices


def bid_reserve_general(x: float, r: float, dist, m: int) -> float:
    """Bid with reserve r: r G(r)/G(x) plus the conditional rival payment.

    A sole bidder (m = 1) facing a reserve bids exactly r.
    """
    if r < 0:
        raise ValueError("reserve must be nonnegative")
    if r == 0.0:
        return bid_symmetric_general(x, dist, m)
    if m < 1:
        raise ValueError("need at least one bidder")
    lo, hi = dist.support
    if not lo <= x <= hi:
        raise ValueError(f"signal {x} outside support [{lo}, {hi}]")
    if x < r:
        raise BelowReserveError(f"signal {x} below reserve {r}")
    if x == r:
        return float(r)
    gx = order_cdf(dist, x, m)
    payment = quadrature(lambda y: y * order_pdf(dist, y, m), r, x).value
    return r * order_cdf(dist, r, m) / gx + payment / gx


def bid_reserve_uniform(x: float, r: float, m: int, omega: float = 1.0) -> float:
    """Uniform closed form r^m/(m x^(m-1)) + x (m-1)/m.

    The leading coefficient 1/m is forced by the boundary condition
    beta(r) = r; see the module notes on the printed variant.
    """
    if not 0.0 <= r <= omega:
        raise ValueError(f"reserve {r} outside [0, {omega}]")
    if not 0.0 <= x <= omega:
        raise ValueError(f"signal {x} outside [0, {omega}]")
    if m < 1 or (r == 0.0 and m < 2):
        raise ValueError("degenerate auction: one bidder and no reserve")
    if x < r:
        raise BelowReserveError(f"signal {x} below reserve {r}")
    if x == 0.0:
        return 0.0
    return r**m / (m * x ** (m - 1)) + x * (m - 1) / m


def _h_lognormal(y: float, mu: float, sigma: float, m: int) -> float:
    """[sqrt(2 pi) Phi((ln y - mu)/sigma)]^(m-1); zero at y <= 0."""
    if y <= 0.0:
        return 0.0
    phi = normal_cdf((math.log(y) - mu) / sigma)
    return (math.sqrt(2.0 * math.pi) * phi) ** (m - 1)


def bid_reserve_lognormal(x: float, r: float, mu: float, sigma: float, m: int,
                          method: str = "numeric",
                          stated_derivative: bool = False) -> float:
    """Log-normal bid above a reserve.

    ``numeric`` integrates the general reserve form and is the ground
    truth. ``taylor`` is the first-order expansion around the reserve,
    x - h(r)(x - r)/h(x); it keeps beta(r) = r exactly. With
    ``stated_derivative`` the first term uses h'(r) instead of h(r), a
    diagnostic variant that first-order consistency does not support.
    """
    if r <= 0.0:
        raise ValueError("reserve must be positive for the log-normal form")
    if x < r:
        raise BelowReserveError(f"signal {x} below reserve {r}")
    if method == "numeric":
        return bid_reserve_general(x, r, LogNormal(mu, sigma), m)
    if method != "taylor":
        raise ValueError(f"unknown method {method!r}")
    h_r = _h_lognormal(r, mu, sigma, m)
    h_x = _h_lognormal(x, mu, sigma, m)
    if stated_derivative:
        u_r = (math.log(r) - mu) / sigma
        phi_r = normal_cdf(u_r)
        hp_r = ((m - 1) * (math.sqrt(2.0 * math.pi) * phi_r) ** (m - 2)
                * math.exp(-0.5 * u_r * u_r) / (r * sigma))
        return x * hp_r * (x - r) / h_x + r * h_r / h_x
    return x - h_r * (x - r) / h_x


def optimal_reserve(x_s: float, dist) -> float:
    """Seller's optimal reserve: root of r - (1 - F(r))/f(r) = x_s.

    Searches (x_s, top of support); raises ConvergenceError when no sign
    change exists there.
    """
    lo, hi = dist.support
    if not lo <= x_s < hi:
        raise ValueError(f"seller value {x_s} outside [{lo}, {hi})")

    def psi(r):
        density = dist.pdf(r)
        if density <= 0.0:
            return -math.inf
        return r - (1.0 - dist.cdf(r)) / density - x_s

    bracket_lo = max(x_s, lo) + 1e-12
    if math.isfinite(hi):
        bracket_hi = hi - 1e-12
        if psi(bracket_lo) * psi(bracket_hi) > 0:
            raise ConvergenceError(
                f"no reserve solves the seller condition on ({x_s}, {hi})")
    else:
        bracket_hi = max(2.0 * bracket_lo, 1.0)
        while psi(bracket_hi) < 0:
            bracket_hi *= 2.0
            if bracket_hi > 1e12:
                raise ConvergenceError(
                    "seller condition has no root below 1e12")
    result = find_root(psi, bracket_lo, bracket_hi, tol=1e-14)
    if abs(result.residual) > 1e-10:
        raise ConvergenceError(
            f"reserve root residual {result.residual} exceeds 1e-10")
    return result.root


# --------------------------------------------------------------------------
# uncertain number of bidders


def bidder_count_pmf(m: int) -> np.ndarray:
    """Symmetric triangular beliefs over facing l = 0..m-1 rivals.

    p_0 = 0, the mass rises linearly to the middle counts and falls
    symmetrically, normalized in closed form for odd and even m alike.
    """
    if m < 2:
        raise ValueError("need at least two potential bidders")
    half = (m - 1) / 2.0
    floor_half = math.floor(half)
    frac = half - floor_half
    step = 1.0 / (floor_half * (floor_half + 1) + (frac + half) * (2.0 * frac))
    counts = np.arange(m, dtype=float)
    return np.where(counts <= half, counts, m - counts) * step


def bid_variable_bidders(x: float, beliefs, per_count_bids, per_count_win) -> float:
    """Average the known-count bids with weights p_l G^l(x).

    ``per_count_bids(l)`` and ``per_count_win(l)`` give the equilibrium bid
    and win probability against exactly l rivals at signal x. Zero total
    weight (e.g. x = 0 with p_0 = 0) yields a zero bid.
    """
    p = np.asarray(beliefs, dtype=float)
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"beliefs must sum to 1, got {p.sum()}")
    weights = np.array([p[l] * per_count_win(l) if p[l] > 0 else 0.0
                        for l in range(p.size)])
    total = weights.sum()
    if total <= 0.0:
        return 0.0
    bid = 0.0
    for l in range(p.size):
        if weights[l] > 0:
            bid += weights[l] * per_count_bids(l)
    return bid / total


def bid_variable_bidders_uniform(x: float, m: int, omega: float = 1.0) -> float:
    """Triangular count beliefs with uniform values, all in closed form."""
    if not 0.0 <= x <= omega:
        raise ValueError(f"signal {x} outside [0, {omega}]")
    beliefs = bidder_count_pmf(m)
    return bid_variable_bidders(
        x, beliefs,
        per_count_bids=lambda l: l / (l + 1) * x,
        per_count_win=lambda l: (x / omega) ** l)


# --------------------------------------------------------------------------
# revenue


def expected_revenue(dist, m: int) -> tuple[float, float]:
    """Expected ex ante payment per bidder and total seller revenue."""
    if m < 2:
        raise ValueError("need at least two bidders")
    hi = upper_cutoff(dist)
    payment = quadrature(
        lambda y: y * (1.0 - dist.cdf(y)) * order_pdf(dist, y, m),
        dist.support[0], hi).value
    return payment, m * payment


# --------------------------------------------------------------------------
# asymmetric values, two groups


@dataclass(frozen=True)
class AsymmetricSolution:
    """Inverse-bid curves phi_i on a common bid grid [~0, b_bar]."""
    b_bar: float
    bids: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    boundary_mismatch: float
    max_foc_residual: float

    def bid_from_value_1(self, x: float) -> float:
        return float(np.interp(x, self.phi1, self.bids))

    def bid_from_value_2(self, x: float) -> float:
        return float(np.interp(x, self.phi2, self.bids))


def solve_asymmetric_two_group(f1_dist, f2_dist, m: int, k: int,
                               tol: float = 1e-8) -> AsymmetricSolution:
    """Equilibrium with k bidders drawing from ``f1_dist`` and m - k from
    ``f2_dist``.

    Integrates the coupled inverse-bid system backward from the common
    maximal bid, shooting on that endpoint until the curves reach the
    origin. Distributions must have bounded support and positive density
    on it.
    """
    if m < 2:
        raise ValueError("need at least two bidders")
    if not 1 <= k <= m - 1:
        raise ValueError(f"group sizes must be positive: k={k}, m={m}")
    omega1, omega2 = f1_dist.support[1], f2_dist.support[1]
    if not (math.isfinite(omega1) and math.isfinite(omega2)):
        raise ValueError("asymmetric solver needs bounded supports")
    n1, n2 = k, m - k
    det = 1.0 - m

    def ratio(dist, v, hi):
        # F/f with the argument clamped into the support: exploratory
        # shots can push a curve transiently past its endpoint
        v = min(max(v, 1e-300), hi)
        return dist.cdf(v) / dist.pdf(v)

    def system(b, y):
        phi1, phi2 = y
        inv1 = 1.0 / (phi1 - b)
        inv2 = 1.0 / (phi2 - b)
        t1 = ((n2 - 1) * inv1 - n2 * inv2) / det
        t2 = ((n1 - 1) * inv2 - n1 * inv1) / det
        return (t1 * ratio(f1_dist, phi1, omega1),
                t2 * ratio(f2_dist, phi2, omega2))

    hi = min(omega1, omega2) * (1.0 - 1e-6)
    sol = shoot_bvp(system, left_conditions=(0.0, 0.0),
                    right_conditions=(omega1, omega2), tol=tol,
                    bracket=(1e-9 * hi, hi))
    bids = sol.grid
    phi1, phi2 = sol.curves
    for name, phi, top in (("group 1", phi1, omega1), ("group 2", phi2, omega2)):
        if (np.diff(phi) < -1e-9).any() or (phi > top * (1 + 1e-9)).any():
            raise ConvergenceError(
                f"{name} inverse bid is not an increasing map into its "
                "support; this configuration has no single-regime "
                "equilibrium of the coupled system")
    residual = _asymmetric_foc_residual(bids, phi1, phi2, f1_dist, f2_dist,
                                        n1, n2)
    if residual > 1e-4:
        raise ConvergenceError(
            f"first-order conditions violated (max residual {residual:.2e})")
    return AsymmetricSolution(b_bar=sol.right_endpoint, bids=bids,
                              phi1=phi1, phi2=phi2,
                              boundary_mismatch=sol.boundary_mismatch,
                              max_foc_residual=residual)


def _asymmetric_foc_residual(bids, phi1, phi2, f1_dist, f2_dist, n1, n2) -> float:
    """Max violation of the first-order conditions, rescaled by phi_i - b.

    Derivatives come from central differences on the tabulated curves, so
    the check is independent of the integrator's own right-hand sides.
    """
    db = np.gradient(bids)
    t1 = np.array([f1_dist.pdf(v) for v in phi1]) * np.gradient(phi1) / db \
        / np.array([f1_dist.cdf(v) for v in phi1])
    t2 = np.array([f2_dist.pdf(v) for v in phi2]) * np.gradient(phi2) / db \
        / np.array([f2_dist.cdf(v) for v in phi2])
    res1 = (phi1 - bids) * ((n1 - 1) * t1 + n2 * t2) - 1.0
    res2 = (phi2 - bids) * (n1 * t1 + (n2 - 1) * t2) - 1.0
    interior = slice(2, -2)
    return float(max(np.max(np.abs(res1[interior])),
                     np.max(np.abs(res2[interior]))))


# --------------------------------------------------------------------------
# interdependent values: Irwin-Hall affiliation


def _diag_value(y: float, alpha: float, xi: float) -> float:
    """Valuation on the diagonal: own signal and highest rival both at y."""
    return (alpha + xi) * y


def _check_interdependent(x: float, m: int, alpha: float, xi: float) -> None:
    if m < 2:
        raise ValueError("interdependent setting needs at least two bidders")
    if not 0.0 <= x <= 2.0:
        raise ValueError(f"signal {x} outside [0, 2]")
    for name, v in (("alpha", alpha), ("xi", xi)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")


def bid_interdependent_irwin_hall(x: float, m: int, alpha: float, xi: float,
                                  method: str = "closed") -> float:
    """Equilibrium bid with affiliated Irwin-Hall signals.

    ``closed`` evaluates the two-term expression (a power-decay term from
    the lower signal branch plus an integration-by-parts term on the upper
    branch); ``quadrature`` integrates the defining conditional-payment
    integral directly. Both use the decay weight that is continuous and
    multiplicative across the density kink at 1, which is what the
    equilibrium differential equation requires.
    """
    _check_interdependent(x, m, alpha, xi)
    if alpha == 0.0 and xi == 0.0:
        return 0.0
    ih = IrwinHall2()
    if method == "closed":
        w = alpha + xi
        if x <= 1.0:
            return 2.0 * w * (m - 1) * x / (2 * m - 1)
        fx = ih.cdf(x)
        first = 2.0 * w * (m - 1) / ((2 * m - 1) * (2.0 * fx) ** (m - 1))
        tail = quadrature(lambda y: ih.cdf(y) ** (m - 1), 1.0, x).value
        second = w * (x - (0.5 ** (m - 1) + tail) / fx ** (m - 1))
        return first + second
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    def integrand(y):
        return (_diag_value(y, alpha, xi) * ih.reverse_hazard(y, m)
                * ih.survival_weight(y, x, m))

    if x == 0.0:
        return 0.0
    pieces = []
    if x <= 1.0:
        pieces.append((0.0, x))
    else:
        pieces.append((0.0, 1.0))
        pieces.append((1.0, x))
    return sum(quadrature(integrand, a, b).value for a, b in pieces)


def highest_rival_conditional_mean(x: float, m: int) -> float:
    """E[highest rival signal | own Irwin-Hall signal x]."""
    ih = IrwinHall2()
    if x <= 0.0:
        return 0.0
    if x <= 1.0:
        return 2.0 * (m - 1) * x / (2 * m - 1)
    # closed lower-branch piece: (m-1) * int_0^1 y^(2m-2) dy / 2^(m-2)
    lower = (m - 1) / ((2 * m - 1) * 2.0 ** (m - 2))
    upper = quadrature(
        lambda y: y * ih.cdf(y) ** (m - 2) * (2.0 - y), 1.0, x).value
    return (lower + (m - 1) * upper) / ih.cdf(x) ** (m - 1)


def screening_level(r: float, m: int, alpha: float, xi: float) -> float:
    """Lowest signal at which expected value conditional on winning meets r."""
    _check_interdependent(0.0, m, alpha, xi)
    if r < 0:
        raise ValueError("reserve must be nonnegative")
    if r == 0.0:
        return 0.0

    def gap(x):
        return alpha * x + xi * highest_rival_conditional_mean(x, m) - r

    top = gap(2.0)
    if top < 0.0:
        raise NoParticipationError(
            f"reserve {r} exceeds the maximal conditional value {top + r}")
    if top == 0.0:
        return 2.0
    result = find_root(gap, 0.0, 2.0, tol=1e-13)
    if abs(result.residual) > 1e-9:
        raise ConvergenceError(
            f"screening residual {result.residual} exceeds 1e-9")
    return result.root


def bid_combined_realistic(x: float, r: float, m: int, alpha: float,
                           xi: float) -> float:
    """Interdependent Irwin-Hall bid with a reserve.

    Integrating-factor solution of beta' = [v(x,x) - beta] g(x|x)/G(x|x)
    with beta = r at the screening level; with r = 0 it collapses to the
    no-reserve interdependent bid.
    """
    _check_interdependent(x, m, alpha, xi)
    if r < 0:
        raise ValueError("reserve must be nonnegative")
    x_star = screening_level(r, m, alpha, xi)
    if x < x_star - 1e-12:
        raise BelowScreeningError(
            f"signal {x} below screening level {x_star}")
    x = max(x, x_star)
    ih = IrwinHall2()

    def integrand(y):
        return (_diag_value(y, alpha, xi) * ih.reverse_hazard(y, m)
                * ih.survival_weight(y, x, m))

    pieces = []
    if x_star < 1.0 < x:
        pieces.append((x_star, 1.0))
        pieces.append((1.0, x))
    elif x_star < x:
        pieces.append((x_star, x))
    acc = r * ih.survival_weight(x_star, x, m) if x_star > 0.0 else 0.0
    acc += sum(quadrature(integrand, a, b).value for a, b in pieces)
    return acc


def bid_combined_uncertain_bidders(x: float, r: float, m: int, alpha: float,
                                   xi: float) -> float:
    """Combined realistic bid averaged over the triangular count beliefs.

    Screening is evaluated per bidder count; counts whose screening level
    exceeds the signal drop out and the remaining weights renormalize. With
    no participating count the signal is below every screening level.
    """
    _check_interdependent(x, m, alpha, xi)
    beliefs = bidder_count_pmf(m)
    fx = IrwinHall2().cdf(x)
    total = 0.0
    acc = 0.0
    for l in range(1, m):
        if beliefs[l] <= 0.0:
            continue
        weight = beliefs[l] * fx ** l
        if weight <= 0.0:
            continue
        try:
            b = bid_combined_realistic(x, r, l + 1, alpha, xi)
        except BelowScreeningError:
            continue
        total += weight
        acc += weight * b
    if total <= 0.0:
        if x == 0.0 and r == 0.0:
            return 0.0
        raise BelowScreeningError(
            f"signal {x} below the screening level of every bidder count")
    return acc / total


# --------------------------------------------------------------------------
# tabulated curves with diagnostics


def symmetric_bid_curve(dist, m: int, reserve: float = 0.0,
                        n_points: int = 200) -> BidCurve:
    """Tabulate the symmetric (optionally reserve-priced) strategy.

    The residual is the first-order condition g(x)(x - beta) - G(x) beta'
    with beta' taken by central differences, a solution-quality
    diagnostic that is independent of how the bids were computed.
    """
    lo, hi = dist.support
    if not math.isfinite(hi):
        hi = upper_cutoff(dist, 1e-6)
    start = reserve if reserve > 0.0 else lo + (hi - lo) * 1e-6
    xs = np.linspace(start, hi, n_points)
    if reserve > 0.0:
        bids = np.array([bid_reserve_general(v, reserve, dist, m) for v in xs])
    else:
        bids = np.array([bid_symmetric_general(v, dist, m) for v in xs])
    dbeta = np.gradient(bids, xs)
    g = np.array([order_pdf(dist, v, m) for v in xs])
    big_g = np.array([order_cdf(dist, v, m) for v in xs])
    residuals = g * (xs - bids) - big_g * dbeta
    return BidCurve(signals=xs, bids=bids, foc_residuals=residuals,
                    boundary_value=float(bids[0]),
                    boundary_target=float(reserve))
