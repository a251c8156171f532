from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConvergenceError, DomainError
from .subtense import (
    WallScene,
    billboard_slope,
    billboard_solid_angle,
    disk_solid_angle,
    wall_angle,
    wall_angle_slope,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
GRID_POINTS = 64
EPS = float(np.finfo(float).eps)
SQRT_EPS = math.sqrt(EPS)
# Half-width of the slope-polishing window, in units of the Brent bracket.
POLISH_WINDOW = 1e3
# Five-point stencil step, relative to max(1, |t|).
SLOPE_STEP = EPS**0.2
# An edge within this many ulps of the interior estimate holds the maximum.
EDGE_ULPS = 4.0
SPILL_BRACKET = (1.25, 1.4)


@dataclass(frozen=True)
class OptimumResult:
    argmax: float
    value: float
    iterations: int
    bracket: float
    at_boundary: bool = False


@dataclass(frozen=True)
class RectOptimum(OptimumResult):
    spills: bool = False


def _scan_peak(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grid_points: int,
) -> tuple[np.ndarray, int]:
    grid = np.linspace(lo, hi, grid_points)
    values = np.array([f(float(t)) for t in grid])
    if not np.all(np.isfinite(values)):
        raise ConvergenceError(f"Objective is not finite on the pre-scan grid over [{lo}, {hi}].")

    best = int(np.argmax(values))
    last = len(values) - 1
    dip_tol = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    for i in range(len(values)):
        if i == best or abs(i - best) <= 1:
            continue
        is_peak = (i == 0 or values[i] >= values[i - 1]) and (i == last or values[i] >= values[i + 1])
        if not is_peak:
            continue
        between = values[min(i, best) : max(i, best) + 1]
        if values[i] - float(between.min()) > dip_tol:
            raise ConvergenceError(
                f"Objective has separated local maxima near {grid[best]:.6g} and {grid[i]:.6g}."
            )
    return grid, best


def _stencil_slope(f: Callable[[float], float], lo: float, hi: float) -> Callable[[float], float]:
    def slope(t: float) -> float:
        h = SLOPE_STEP * max(1.0, abs(t))
        if t - 2.0 * h < lo:
            return (f(t + h) - f(t)) / h
        if t + 2.0 * h > hi:
            return (f(t) - f(t - h)) / h
        return (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)

    return slope


def _polish(
    derivative: Callable[[float], float],
    estimate: float,
    a: float,
    b: float,
    tol: float,
    bracket: float,
) -> tuple[float, int] | None:
    width = max(POLISH_WINDOW * bracket, 10.0 * tol)
    left = max(a, estimate - width)
    right = min(b, estimate + width)
    slope_left = derivative(left)
    slope_right = derivative(right)
    if not slope_left > 0.0 > slope_right:
        logger.debug("No slope sign change on [%s, %s]; keeping Brent estimate %s", left, right, estimate)
        return None
    root, info = brentq(derivative, left, right, xtol=tol, full_output=True)
    return float(root), int(info.function_calls)


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    *,
    derivative: Callable[[float], float] | None = None,
    grid_points: int = GRID_POINTS,
) -> OptimumResult:
    """Maximize a unimodal f on [lo, hi].

    A coarse grid locates the peak cell and bounded Brent search runs inside it. The
    Brent estimate is then refined to `tol` on the root of the slope: the analytic
    derivative when given, a five-point difference otherwise.
    """
    if not lo < hi:
        raise DomainError(f"maximize_scalar needs lo < hi, got [{lo}, {hi}].")
    if not tol > 0.0:
        raise DomainError(f"Tolerance must be positive, got {tol}.")

    grid, best = _scan_peak(f, lo, hi, grid_points)
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, len(grid) - 1)])

    outcome = minimize_scalar(
        lambda t: -f(t),
        bounds=(a, b),
        method="bounded",
        options={"xatol": tol, "maxiter": 500},
    )
    if not outcome.success:
        raise ConvergenceError(f"Bounded search on [{a}, {b}] failed: {outcome.message}")
    argmax = float(outcome.x)
    iterations = int(outcome.nfev)
    bracket = 2.0 * (SQRT_EPS * abs(argmax) + tol / 3.0)

    slope = derivative if derivative is not None else _stencil_slope(f, lo, hi)
    polished = _polish(slope, argmax, a, b, tol, bracket)
    if polished is not None:
        argmax, calls = polished
        iterations += calls
        bracket = tol

    value = f(argmax)
    at_boundary = False
    for edge, descent in ((lo, -1.0), (hi, 1.0)):
        if not a <= edge <= b:
            continue
        edge_value = f(edge)
        # stationary or falling into the interval from the edge, with no interior root
        falls_inward = polished is None and derivative is not None and descent * derivative(edge) >= 0.0
        if (
            abs(argmax - edge) <= bracket
            or edge_value >= value - EDGE_ULPS * EPS * abs(value)
            or falls_inward
        ):
            argmax, value, at_boundary = edge, edge_value, True
            bracket = tol
    if bracket > tol:
        logger.debug("Slope polishing failed near %r; bracket %.3g exceeds tol %.3g", argmax, bracket, tol)

    logger.debug("maximize_scalar on [%s, %s]: argmax=%r value=%r", lo, hi, argmax, value)
    return OptimumResult(
        argmax=argmax,
        value=value,
        iterations=iterations,
        bracket=bracket,
        at_boundary=at_boundary,
    )


def root_find(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
) -> float:
    if not lo < hi:
        raise DomainError(f"root_find needs lo < hi, got [{lo}, {hi}].")
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not f_lo * f_hi < 0.0:
        raise ConvergenceError(
            f"No sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}."
        )
    return float(brentq(f, lo, hi, xtol=tol))


def wall_xmax(r: float, tol: float = DEFAULT_TOL) -> OptimumResult:
    if not r > 1.0:
        raise DomainError(f"wall_xmax needs r > 1, got r={r}.")

    # the angle is taken as 0 under the wall
    def angle(x: float) -> float:
        return wall_angle(WallScene(r=r, x=x)) if x > 0.0 else 0.0

    return maximize_scalar(
        angle,
        0.0,
        4.0 * r,
        tol,
        derivative=lambda x: wall_angle_slope(WallScene(r=r, x=x)),
    )


def disk_xmax(r: float, tol: float = DEFAULT_TOL) -> OptimumResult:
    if not r > 1.0:
        raise DomainError(f"disk_xmax needs r > 1, got r={r}.")
    return maximize_scalar(lambda x: disk_solid_angle(r, x), 0.0, 4.0 * r, tol)


def disk_xmax_asymptote(r: float) -> float:
    # the finite-disk correction to r/sqrt2 decays like 1/r
    return r / math.sqrt(2.0) - 7.0 * math.sqrt(2.0) / (24.0 * r)


def disk_xmax_rough(r: float) -> float:
    return 0.7 * r - 0.1


def rect_lmax(x: float, r: float, tol: float = DEFAULT_TOL) -> RectOptimum:
    if not x > 0.0:
        raise DomainError(f"rect_lmax needs x > 0, got x={x}.")
    if not r >= 1.0:
        raise DomainError(f"rect_lmax needs r >= 1, got r={r}.")
    result = maximize_scalar(
        lambda ell: billboard_solid_angle(x, r, ell),
        1.0,
        20.0 * r,
        tol,
        derivative=lambda ell: billboard_slope(x, r, ell),
    )
    spills = r / math.sqrt(2.0) - result.argmax / 2.0 < 0.0
    return RectOptimum(**asdict(result), spills=spills)


def spill_margin(r: float, x: float = 1.0, tol: float = DEFAULT_TOL) -> float:
    return r / math.sqrt(2.0) - rect_lmax(x, r, tol).argmax / 2.0


def spill_threshold(tol: float = DEFAULT_TOL, x: float = 1.0) -> float:
    lo, hi = SPILL_BRACKET
    return root_find(lambda r: spill_margin(r, x, tol), lo, hi, tol)
