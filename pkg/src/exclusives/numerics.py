"""Shared numerical kernel: quadrature, bracketed root finding, the standard
normal CDF, and a shooting solver for two-point boundary value systems.

Quadrature and root finding wrap the adaptive Gauss-Kronrod and Brent
routines from scipy; the shooting machinery is local because the boundary
structure (known values at an unknown right endpoint, zero target at the
left) is specific to inverse-bid systems.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special


class ConvergenceError(RuntimeError):
    """A numeric procedure failed to converge; message carries diagnostics."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    bracket: tuple[float, float]


def quadrature(f, a: float, b: float, tol: float = 1e-10) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Adaptive subdivision with an embedded higher-order rule for the error
    estimate; integrable endpoint singularities are handled by the
    underlying open extrapolation rule.
    """
    if a > b:
        raise ValueError(f"empty interval: a={a} > b={b}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    value, err, info = integrate.quad(f, a, b, epsabs=tol, epsrel=tol,
                                      limit=200, full_output=True)
    if not np.isfinite(value):
        raise ConvergenceError(f"integral of {f} over [{a}, {b}] is not finite")
    return QuadratureResult(float(value), float(err), int(info["last"]))


def find_root(f, lo: float, hi: float, tol: float = 1e-12,
              max_iter: int = 200) -> RootResult:
    """Locate a root of ``f`` inside the bracket ``[lo, hi]``.

    Requires a sign change on the bracket. The returned root never leaves
    the initial bracket; ``residual`` is ``f`` evaluated at the root.
    """
    if lo > hi:
        raise ValueError(f"invalid bracket: lo={lo} > hi={hi}")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return RootResult(float(lo), 0.0, 0, (float(lo), float(hi)))
    if f_hi == 0.0:
        return RootResult(float(hi), 0.0, 0, (float(lo), float(hi)))
    if f_lo * f_hi > 0:
        raise ValueError(
            f"no sign change on bracket [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")
    root, info = _brentq(f, lo, hi, xtol=tol, max_iter=max_iter)
    return RootResult(float(root), float(f(root)), info, (float(lo), float(hi)))


def _brentq(f, lo, hi, xtol, max_iter):
    from scipy.optimize import brentq

    root, res = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps,
                       maxiter=max_iter, full_output=True)
    if not res.converged:
        raise ConvergenceError(f"root search did not converge on [{lo}, {hi}]")
    return root, res.iterations


def normal_cdf(u) -> float:
    """Standard normal CDF, accurate to machine precision."""
    return special.ndtr(u)


@dataclass(frozen=True)
class ShootingSolution:
    """Curves from a converged shoot: grid runs left to right."""
    right_endpoint: float
    grid: np.ndarray
    curves: np.ndarray  # shape (n_components, len(grid))
    boundary_mismatch: float
    iterations: int


def shoot_bvp(system, left_conditions, right_conditions, tol: float = 1e-8,
              bracket: tuple[float, float] | None = None,
              grid_points: int = 4001) -> ShootingSolution:
    """Solve a two-point boundary-value system by shooting on the unknown
    right endpoint.

    ``system(t, y)`` gives the right-hand sides. The solution takes the
    values ``right_conditions`` at an unknown right endpoint ``t_bar`` and
    must reach ``left_conditions`` at ``t = 0``. Integration runs from
    ``t_bar`` downward, where the values are known, so the singular region
    near the left endpoint is met last with a contracted error.

    The shoot bisects ``t_bar`` on a crash/survive indicator: too large an
    endpoint drives some component into the ``y_i = t`` diagonal at a
    positive ``t``, too small leaves a positive gap at ``t = 0``.
    """
    right = np.asarray(right_conditions, dtype=float)
    left = np.asarray(left_conditions, dtype=float)
    if right.shape != left.shape:
        raise ValueError("boundary condition vectors must have equal length")
    if bracket is None:
        hi = float(np.min(right))
        bracket = (1e-9 * hi, hi * (1.0 - 1e-12))
    lo, hi = bracket

    t_floor = 1e-12 * hi

    def integrate_down(t_bar):
        # stop when a component meets the diagonal (value - t crosses 0)
        def diag_event(t, y):
            return float(np.min(y) - t) - t_floor
        diag_event.terminal = True
        diag_event.direction = -1
        sol = integrate.solve_ivp(system, (t_bar, t_floor), right,
                                  method="RK45", rtol=1e-11, atol=1e-13,
                                  events=diag_event, dense_output=True)
        return sol

    def crashed(sol) -> bool:
        if sol.t_events[0].size:
            return True
        if sol.status != 0:
            # step-size underflow against the diagonal wall counts as a
            # crash: the trajectory cannot continue toward the origin
            return True
        # events are checked at step endpoints only; rescan densely for
        # dips through the diagonal inside a single step
        ts = np.linspace(sol.t[0], sol.t[-1], 2000)
        ys = sol.sol(ts)
        return bool(np.min(ys.min(axis=0) - ts) <= t_floor)

    def miss(t_bar):
        if float(np.min(right)) - t_bar <= t_floor:
            return -1.0            # starts on the diagonal: instant crash
        sol = integrate_down(t_bar)
        if crashed(sol):
            return -1.0
        y_end = sol.y[:, -1]
        return float(np.min(y_end - left))

    m_lo, m_hi = miss(lo), miss(hi)
    if not (m_lo > 0 > m_hi or m_lo < 0 < m_hi):
        raise ConvergenceError(
            f"shooting bracket [{lo}, {hi}] does not straddle the boundary: "
            f"miss({lo})={m_lo}, miss({hi})={m_hi}")

    # Bisect close to machine precision: a perturbation of the right
    # endpoint grows like t_bar/t while integrating toward the origin, so
    # the endpoint must be far tighter than the curve tolerance itself.
    iterations = 0
    a, b = lo, hi
    fa = m_lo
    xtol = max(tol * 1e-5, 64 * np.finfo(float).eps * hi)
    while b - a > xtol and iterations < 200:
        mid = 0.5 * (a + b)
        fm = miss(mid)
        if fm == 0.0:
            a = b = mid
            fa = 0.0
            break
        if (fa > 0) == (fm > 0):
            a, fa = mid, fm
        else:
            b = mid
        iterations += 1

    # pick the survive side: curves reach the origin without crashing
    if fa > 0 or a == b:
        t_bar = a
    else:
        t_bar = b if miss(b) > 0 else a
    sol = integrate_down(t_bar)
    if crashed(sol):
        t_bar = a if t_bar != a else b
        sol = integrate_down(t_bar)
        if crashed(sol):
            raise ConvergenceError(
                "both bisection endpoints crash into the diagonal")
    t_reached = sol.t[-1]
    mismatch = float(np.max(np.abs(sol.y[:, -1] - left)))
    # tabulate away from the singular origin, where backward integration
    # error is amplified by t_bar/t
    grid_lo = max(t_reached, 1e-3 * t_bar)
    grid = np.linspace(grid_lo, t_bar, grid_points)
    curves = sol.sol(grid)
    return ShootingSolution(float(t_bar), grid, curves, mismatch, iterations)
