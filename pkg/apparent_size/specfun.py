from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable

from scipy.integrate import quad
from scipy.special import elliprf, elliprj, spence

from .errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

# Elliptic integrals take the parameter m = k^2, Pi[n, m] with characteristic n.

# QUADPACK flags roundoff long before an estimate is useless; such estimates are
# kept when the reported error stays below this (scaled by max(1, |value|)).
ROUNDOFF_ACCEPT = 1e-9


@dataclass(frozen=True)
class EllipticArgs:
    m: float
    n: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.m < 1.0:
            raise DomainError(f"Elliptic parameter m must lie in [0, 1), got {self.m}.")
        if not self.n < 1.0:
            raise DomainError(f"Elliptic characteristic n must be < 1, got {self.n}.")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 10_000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("Quadrature tolerances must be strictly positive.")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1.")

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> "QuadratureSpec":
        section = config.get("quadrature", {})
        return cls(
            abs_tol=float(section.get("abs_tol", cls.abs_tol)),
            rel_tol=float(section.get("rel_tol", cls.rel_tol)),
            max_subdivisions=int(section.get("max_subdivisions", cls.max_subdivisions)),
        )


DEFAULT_QUADRATURE = QuadratureSpec()


def k_from_complement(mc):
    """K[1 - mc]; accepts arrays."""
    return elliprf(0.0, mc, 1.0)


def pi_from_complements(nc, mc):
    """Pi[1 - nc, 1 - mc]; taking complements keeps precision as n -> 1."""
    return elliprf(0.0, mc, 1.0) + (1.0 - nc) / 3.0 * elliprj(0.0, mc, 1.0, nc)


def ellip_k(m: float) -> float:
    args = EllipticArgs(m=m)
    return float(k_from_complement(1.0 - args.m))


def ellip_pi(n: float, m: float) -> float:
    args = EllipticArgs(m=m, n=n)
    return float(pi_from_complements(1.0 - args.n, 1.0 - args.m))


def dilog(xi: float) -> float:
    """Real dilogarithm Li2(xi) = sum xi^k / k^2 for xi <= 1."""
    if not xi <= 1.0:
        raise DomainError(f"dilog is real only for xi <= 1, got {xi}.")
    # spence(z) = Li2(1 - z)
    return float(spence(1.0 - xi))


def _quad_piece(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec,
) -> tuple[float, float]:
    def guarded(t: float) -> float:
        value = f(t)
        if math.isnan(value):
            raise ConvergenceError(f"Integrand returned NaN at t={t!r}.")
        return value

    result = quad(
        guarded,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, abserr = float(result[0]), float(result[1])
    if math.isnan(value):
        raise ConvergenceError(f"Quadrature on [{lo}, {hi}] produced NaN.")
    if len(result) > 3:
        message = str(result[3]).strip().splitlines()[0]
        if not abserr <= ROUNDOFF_ACCEPT * max(1.0, abs(value)):
            raise ConvergenceError(
                f"Quadrature on [{lo}, {hi}] did not converge "
                f"(error estimate {abserr:.3e}): {message}"
            )
        logger.debug("Accepted quadrature on [%s, %s] with warning: %s", lo, hi, message)
    return value, abserr


def integrate_with_error(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Iterable[float] = (),
) -> tuple[float, float]:
    """Integrate f over [a, b], splitting at the declared singular points."""
    if not a < b:
        raise DomainError(f"Integration limits must satisfy a < b, got [{a}, {b}].")
    cuts = sorted({float(p) for p in points if a < p < b})
    edges = [a, *cuts, b]
    total = 0.0
    error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, abserr = _quad_piece(f, lo, hi, spec)
        total += value
        error += abserr
    return total, error


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Iterable[float] = (),
) -> float:
    return integrate_with_error(f, a, b, spec, points)[0]


def integrate2d(
    f: Callable[[float, float], float],
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    x_points: Iterable[float] = (),
    y_points: Iterable[float] = (),
) -> float:
    """Iterated integral of f(x, y): inner over x, outer over y.

    Half of the absolute tolerance goes to the outer rule; the inner rule gets the
    other half spread over the outer interval length.
    """
    xa, xb = x_range
    ya, yb = y_range
    if not (xa < xb and ya < yb):
        raise DomainError(f"Integration ranges must be increasing, got {x_range} and {y_range}.")
    inner_spec = replace(spec, abs_tol=spec.abs_tol / (2.0 * (yb - ya)))
    outer_spec = replace(spec, abs_tol=spec.abs_tol / 2.0)
    inner_points = tuple(x_points)

    def inner(y: float) -> float:
        return integrate(lambda x: f(x, y), xa, xb, inner_spec, inner_points)

    return integrate(inner, ya, yb, outer_spec, y_points)


def defining_ellip_k(m: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """K[m] straight from its integral (t = sin u removes the endpoint singularity)."""
    EllipticArgs(m=m)
    return integrate(lambda u: 1.0 / math.sqrt(1.0 - m * math.sin(u) ** 2), 0.0, math.pi / 2, spec)


def defining_ellip_pi(n: float, m: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    EllipticArgs(m=m, n=n)

    def integrand(u: float) -> float:
        s2 = math.sin(u) ** 2
        return 1.0 / ((1.0 - n * s2) * math.sqrt(1.0 - m * s2))

    return integrate(integrand, 0.0, math.pi / 2, spec)
