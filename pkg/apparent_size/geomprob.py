from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .specfun import QuadratureSpec, dilog, integrate, integrate2d
from .subtense import (
    DEGENERATE_CROSS,
    KEYHOLE_SLOPE,
    UNIT_NORM_TOL,
    base_vector,
    dihedral_angles,
    dihedral_closed_form,
    disk_solid_angle_many,
    keyhole_angle_circle,
    keyhole_angle_sphere_many,
)

logger = logging.getLogger(__name__)

KEYHOLE_SUPPORT = math.atan(KEYHOLE_SLOPE)
B_AXIS = np.array([1.0, 0.0, 0.0])
KEYHOLE_DISK_RADIUS = 0.5
DISK_PLANE_TOL = 1e-12
DEFAULT_BATCH = 1_000_000

DENSITY_QUADRATURE = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13)
DIHEDRAL_QUADRATURE = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)

Draw = Callable[[np.random.Generator, int], "tuple[np.ndarray, int]"]


@dataclass(frozen=True)
class Substitution:
    """omega = angle(u) carries [u_lo, u_hi] onto the support with weight(u) du = pdf d(omega)."""

    u_lo: float
    u_hi: float
    angle: Callable[[float], float]
    weight: Callable[[float], float]


@dataclass(frozen=True)
class Density:
    support_lo: float
    support_hi: float
    pdf: Callable[[float], float]
    cdf: Callable[[float], float] | None = None
    substitution: Substitution | None = None
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not self.support_lo < self.support_hi:
            raise DomainError("Density support must be a nonempty interval.")

    def __call__(self, omega: float) -> float:
        if not self.support_lo < omega < self.support_hi:
            return 0.0
        return self.pdf(omega)

    def expectation(self, g: Callable[[float], float], spec: QuadratureSpec = DENSITY_QUADRATURE) -> float:
        sub = self.substitution
        if sub is not None:
            return integrate(lambda u: g(sub.angle(u)) * sub.weight(u), sub.u_lo, sub.u_hi, spec)
        return integrate(
            lambda w: g(w) * self.pdf(w),
            self.support_lo,
            self.support_hi,
            spec,
            self.breakpoints,
        )

    def normalization(self, spec: QuadratureSpec = DENSITY_QUADRATURE) -> float:
        return self.expectation(lambda _: 1.0, spec)

    def moment(self, k: int, spec: QuadratureSpec = DENSITY_QUADRATURE) -> float:
        return self.expectation(lambda w: w**k, spec)

    def probability(self, lo: float, hi: float, spec: QuadratureSpec = DENSITY_QUADRATURE) -> float:
        lo = max(lo, self.support_lo)
        hi = min(hi, self.support_hi)
        if not lo < hi:
            return 0.0
        if self.cdf is not None:
            upper = 1.0 if hi >= self.support_hi else self.cdf(hi)
            lower = 0.0 if lo <= self.support_lo else self.cdf(lo)
            return upper - lower
        return integrate(self.pdf, lo, hi, spec, self.breakpoints)


# Keyhole densities; both are written in t = tan(omega), and t = (4/3) sin(u)
# turns sqrt(16 - 9 t^2) into 4 cos(u).

def _keyhole_angle_of(u: float) -> float:
    return math.atan(KEYHOLE_SLOPE * math.sin(u))


def _reach(omega: float) -> float:
    return min(1.0, 0.75 * math.tan(omega))


def _circle_density(omega: float) -> float:
    t = math.tan(omega)
    return 6.0 / math.pi / (math.cos(omega) ** 2 * math.sqrt(16.0 - 9.0 * t * t))


def _sphere_density(omega: float) -> float:
    t = math.tan(omega)
    return 2.25 * t / (math.cos(omega) ** 2 * math.sqrt(16.0 - 9.0 * t * t))


def circle_pdf() -> Density:
    return Density(
        support_lo=0.0,
        support_hi=KEYHOLE_SUPPORT,
        pdf=_circle_density,
        cdf=lambda omega: 2.0 / math.pi * math.asin(_reach(max(omega, 0.0))),
        substitution=Substitution(0.0, math.pi / 2.0, _keyhole_angle_of, lambda u: 2.0 / math.pi),
    )


def sphere_pdf() -> Density:
    return Density(
        support_lo=0.0,
        support_hi=KEYHOLE_SUPPORT,
        pdf=_sphere_density,
        cdf=lambda omega: 1.0 - math.sqrt(1.0 - _reach(max(omega, 0.0)) ** 2),
        substitution=Substitution(0.0, math.pi / 2.0, _keyhole_angle_of, math.sin),
    )


def _dihedral_density(alpha: float) -> float:
    cosine = math.cos(alpha)
    if cosine == 0.0:
        return math.inf
    sine2 = math.sin(alpha) ** 2
    if abs(cosine) < 0.5:
        log_cos = math.log(abs(cosine))
    else:
        log_cos = 0.5 * math.log1p(-sine2)
    return -log_cos / (math.pi * sine2)


def dihedral_pdf() -> Density:
    """Density of the apparent magnitude of a right angle (a = pi/2)."""
    return Density(
        support_lo=0.0,
        support_hi=math.pi,
        pdf=_dihedral_density,
        breakpoints=(math.pi / 2.0,),
    )


def circle_moments_closed() -> tuple[float, float]:
    ln2 = math.log(2.0)
    li_quarter = dilog(0.25)
    mean = (math.pi**2 - 6.0 * ln2**2 - 3.0 * li_quarter) / (3.0 * math.pi)
    second = li_quarter - dilog(-0.25)
    return mean, second


def circle_moments_quad(spec: QuadratureSpec = DENSITY_QUADRATURE) -> tuple[float, float]:
    density = circle_pdf()
    return density.moment(1, spec), density.moment(2, spec)


def sphere_moments_quad(spec: QuadratureSpec = DENSITY_QUADRATURE) -> tuple[float, float]:
    density = sphere_pdf()
    return density.moment(1, spec), density.moment(2, spec)


def dihedral_right_moments_closed() -> tuple[float, float]:
    return math.pi / 2.0, math.pi**2 / 4.0 + math.log(2.0) ** 2


def _tilt_breaks(a: float) -> tuple[float, ...]:
    # Lines along which the closed-form argument is 0/0 at x = 0 or x = pi.
    candidates = (math.pi - a, math.pi / 2.0 - a, 1.5 * math.pi - a)
    return tuple(y for y in candidates if 0.0 < y < math.pi)


def dihedral_moments_quad(a: float, spec: QuadratureSpec = DIHEDRAL_QUADRATURE) -> tuple[float, float]:
    """E(alpha | a) and E(alpha^2 | a) over A uniform on the sphere."""
    if not 0.0 < a < math.pi:
        raise DomainError(f"Base side must lie in (0, pi), got a={a}.")
    breaks = _tilt_breaks(a)

    def weighted(power: int) -> Callable[[float, float], float]:
        def integrand(x: float, y: float) -> float:
            return dihedral_closed_form(x, y, a) ** power * math.sin(y) / (2.0 * math.pi)

        return integrand

    bounds = (0.0, math.pi)
    mean = integrate2d(weighted(1), bounds, bounds, spec, y_points=breaks)
    second = integrate2d(weighted(2), bounds, bounds, spec, y_points=breaks)
    return mean, second


def dihedral_m2_pi3_integral(spec: QuadratureSpec = DIHEDRAL_QUADRATURE) -> float:
    root3 = math.sqrt(3.0)

    def integrand(x: float, y: float) -> float:
        tilt = math.atan((math.sin(y) / root3 + math.cos(x) * math.cos(y)) / math.sin(x))
        return tilt * tilt * math.sin(y) / (2.0 * math.pi)

    bounds = (0.0, math.pi)
    return integrate2d(integrand, bounds, bounds, spec, y_points=_tilt_breaks(math.pi / 3.0))


def dihedral_m2_pi3(spec: QuadratureSpec = DIHEDRAL_QUADRATURE) -> float:
    return math.pi**2 / 12.0 + dihedral_m2_pi3_integral(spec)


# Monte Carlo

@dataclass(frozen=True)
class RandomStream:
    seed: int
    substream: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"Seed must be a 64-bit nonnegative integer, got {self.seed}.")
        if self.substream < 0:
            raise DomainError(f"Substream index must be nonnegative, got {self.substream}.")

    def generator(self) -> np.random.Generator:
        return self.child(0)

    def child(self, chunk: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.substream, chunk))
        return np.random.Generator(np.random.PCG64(sequence))


@dataclass(frozen=True)
class MomentReport:
    mean: float
    second_moment: float
    n_samples: int
    se_mean: float
    se_second: float
    seed: int
    substream: int = 0
    resampled: int = 0

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2


@dataclass(frozen=True)
class MomentSums:
    count: int = 0
    total: float = 0.0
    total_sq: float = 0.0
    total_4th: float = 0.0

    @classmethod
    def of(cls, samples: np.ndarray) -> "MomentSums":
        squares = samples * samples
        return cls(
            count=int(samples.size),
            total=float(samples.sum()),
            total_sq=float(squares.sum()),
            total_4th=float((squares * squares).sum()),
        )

    def merge(self, other: "MomentSums") -> "MomentSums":
        return MomentSums(
            count=self.count + other.count,
            total=self.total + other.total,
            total_sq=self.total_sq + other.total_sq,
            total_4th=self.total_4th + other.total_4th,
        )

    def report(self, stream: RandomStream, resampled: int = 0) -> MomentReport:
        n = self.count
        if n < 1:
            raise DomainError("Cannot report moments of an empty sample.")
        mean = self.total / n
        second = self.total_sq / n
        if n > 1:
            var_first = max(0.0, (self.total_sq - self.total * mean) / (n - 1))
            var_second = max(0.0, (self.total_4th - self.total_sq * second) / (n - 1))
        else:
            var_first = var_second = 0.0
        return MomentReport(
            mean=mean,
            second_moment=second,
            n_samples=n,
            se_mean=math.sqrt(var_first / n),
            se_second=math.sqrt(var_second / n),
            seed=stream.seed,
            substream=stream.substream,
            resampled=resampled,
        )


def _uniform_sphere(rng: np.random.Generator, size: int) -> np.ndarray:
    # area measure: longitude uniform, cos(colatitude) uniform on [-1, 1]
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    cos_phi = rng.uniform(-1.0, 1.0, size)
    sin_phi = np.sqrt(1.0 - cos_phi * cos_phi)
    return np.stack((sin_phi * np.cos(theta), sin_phi * np.sin(theta), cos_phi), axis=-1)


def _sphere_points(
    rng: np.random.Generator,
    size: int,
    reject: Callable[[np.ndarray], np.ndarray],
) -> tuple[np.ndarray, int]:
    points = _uniform_sphere(rng, size)
    redraws = 0
    bad = reject(points)
    while bad.any():
        count = int(bad.sum())
        redraws += count
        points[bad] = _uniform_sphere(rng, count)
        bad = reject(points)
    return points, redraws


def draw_circle(rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    return keyhole_angle_circle(theta), 0


def draw_sphere(rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    cos_phi = rng.uniform(-1.0, 1.0, size)
    return keyhole_angle_sphere_many(theta, np.arccos(cos_phi)), 0


def dihedral_draw(c_vec) -> Draw:
    c_vec = np.asarray(c_vec, dtype=float)

    def reject(points: np.ndarray) -> np.ndarray:
        return (np.linalg.norm(np.cross(points, B_AXIS), axis=-1) <= DEGENERATE_CROSS) | (
            np.linalg.norm(np.cross(points, c_vec), axis=-1) <= DEGENERATE_CROSS
        )

    def draw(rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
        points, redraws = _sphere_points(rng, size, reject)
        return dihedral_angles(points, B_AXIS, c_vec), redraws

    return draw


def draw_disk(rng: np.random.Generator, size: int) -> tuple[np.ndarray, int]:
    points, redraws = _sphere_points(rng, size, lambda p: np.abs(p[:, 2]) < DISK_PLANE_TOL)
    rho = np.hypot(points[:, 0], points[:, 1])
    height = np.abs(points[:, 2])
    return disk_solid_angle_many(rho / KEYHOLE_DISK_RADIUS, height / KEYHOLE_DISK_RADIUS), redraws


def run_moments(
    draw: Draw,
    n: int,
    stream: RandomStream,
    *,
    substreams: int = 1,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH,
) -> MomentReport:
    """Split n samples over disjoint chunks of the stream and merge them in chunk order."""
    if n < 1:
        raise DomainError(f"Sample count must be at least 1, got {n}.")
    if substreams < 1 or workers < 1 or batch_size < 1:
        raise DomainError("substreams, workers and batch_size must all be at least 1.")
    sizes = [n // substreams + (1 if j < n % substreams else 0) for j in range(substreams)]

    def run_chunk(chunk: int) -> tuple[MomentSums, int]:
        rng = stream.child(chunk)
        sums = MomentSums()
        redraws = 0
        remaining = sizes[chunk]
        while remaining > 0:
            size = min(batch_size, remaining)
            samples, extra = draw(rng, size)
            sums = sums.merge(MomentSums.of(samples))
            redraws += extra
            remaining -= size
        return sums, redraws

    if workers > 1 and substreams > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_chunk, range(substreams)))
    else:
        outcomes = [run_chunk(chunk) for chunk in range(substreams)]

    merged = MomentSums()
    resampled = 0
    for sums, redraws in outcomes:
        merged = merged.merge(sums)
        resampled += redraws
    if resampled:
        logger.debug("Resampled %d degenerate observers (seed=%d)", resampled, stream.seed)
    return merged.report(stream, resampled)


def mc_circle(n: int, stream: RandomStream, **options) -> MomentReport:
    return run_moments(draw_circle, n, stream, **options)


def mc_sphere(n: int, stream: RandomStream, **options) -> MomentReport:
    return run_moments(draw_sphere, n, stream, **options)


def mc_dihedral(c_vec, n: int, stream: RandomStream, **options) -> MomentReport:
    c_arr = np.asarray(c_vec, dtype=float)
    if c_arr.shape != (3,) or abs(float(np.linalg.norm(c_arr)) - 1.0) > UNIT_NORM_TOL:
        raise DomainError("C must be a unit vector in R^3.")
    return run_moments(dihedral_draw(c_arr), n, stream, **options)


def mc_dihedral_side(a: float, n: int, stream: RandomStream, **options) -> MomentReport:
    """mc_dihedral with C at base side a from B."""
    return mc_dihedral(base_vector(a), n, stream, **options)


def mc_disk_from_sphere(n: int, stream: RandomStream, **options) -> MomentReport:
    return run_moments(draw_disk, n, stream, **options)
