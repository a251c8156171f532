from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import QuadratureSpec, integrate2d, k_from_complement, pi_from_complements

# |r - 1| below this evaluates the rim branch of the disk formula, where the
# (1 - r)/(1 + r) coefficient vanishes while Pi diverges.
RIM_BRANCH_WIDTH = 1e-8
KEYHOLE_SLOPE = 4.0 / 3.0
DEGENERATE_CROSS = 1e-12
UNIT_NORM_TOL = 1e-9

ORACLE_QUADRATURE = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11)


@dataclass(frozen=True)
class WallScene:
    r: float
    x: float

    def __post_init__(self) -> None:
        if not self.r > 1.0:
            raise DomainError(f"Wall object needs r > 1 to stay above the floor, got r={self.r}.")
        if not self.x >= 0.0:
            raise DomainError(f"Observer distance must be nonnegative, got x={self.x}.")


@dataclass(frozen=True)
class DiskScene:
    R: float
    rho: float
    h: float

    def __post_init__(self) -> None:
        if not self.R > 0.0:
            raise DomainError(f"Disk radius must be positive, got R={self.R}.")
        if not (self.rho >= 0.0 and self.h >= 0.0):
            raise DomainError(f"Offset and distance must be nonnegative, got rho={self.rho}, h={self.h}.")
        if self.h == 0.0 and abs(self.rho / self.R - 1.0) < RIM_BRANCH_WIDTH:
            raise DomainError("Observer on the disk rim in the disk plane has no defined solid angle.")

    @property
    def r(self) -> float:
        return self.rho / self.R

    @property
    def x(self) -> float:
        return self.h / self.R


@dataclass(frozen=True)
class RectScene:
    d: float
    y1: float
    y2: float
    z1: float
    z2: float

    def __post_init__(self) -> None:
        if not self.d > 0.0:
            raise DomainError(f"Distance to the rectangle plane must be positive, got d={self.d}.")
        if not (self.y1 < self.y2 and self.z1 < self.z2):
            raise DomainError("Rectangle corners must satisfy y1 < y2 and z1 < z2.")

    def split_y(self, y_mid: float) -> tuple["RectScene", "RectScene"]:
        return (
            RectScene(self.d, self.y1, y_mid, self.z1, self.z2),
            RectScene(self.d, y_mid, self.y2, self.z1, self.z2),
        )


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 2.0 * math.pi:
            raise DomainError(f"theta must lie in [0, 2pi), got {self.theta}.")
        if not 0.0 <= self.phi <= math.pi:
            raise DomainError(f"phi must lie in [0, pi], got {self.phi}.")

    def cartesian(self) -> np.ndarray:
        sin_phi = math.sin(self.phi)
        return np.array(
            [math.cos(self.theta) * sin_phi, math.sin(self.theta) * sin_phi, math.cos(self.phi)]
        )

    @classmethod
    def from_cartesian(cls, vector) -> "SpherePoint":
        v = np.asarray(vector, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise DomainError("Cannot place the zero vector on the sphere.")
        x, y, z = v / norm
        theta = math.atan2(y, x) % (2.0 * math.pi)
        if theta >= 2.0 * math.pi:
            theta = 0.0
        return cls(theta=theta, phi=math.acos(max(-1.0, min(1.0, z))))


# Wall segment [r - 1, r + 1] seen from (x, 0).

def wall_angle(scene: WallScene) -> float:
    if scene.x == 0.0:
        raise DomainError("Observer directly under the wall (x = 0) sees no angle.")
    # atan2 of the cross and dot products of the two sight lines
    return math.atan2(2.0 * scene.x, scene.x**2 + scene.r**2 - 1.0)


def wall_angle_cosine_law(scene: WallScene) -> float:
    near = math.hypot(scene.x, scene.r - 1.0)
    far = math.hypot(scene.x, scene.r + 1.0)
    cosine = (near**2 + far**2 - 4.0) / (2.0 * near * far)
    return math.acos(max(-1.0, min(1.0, cosine)))


def wall_angle_slope(scene: WallScene) -> float:
    x, r = scene.x, scene.r
    return (r - 1.0) / (x**2 + (r - 1.0) ** 2) - (r + 1.0) / (x**2 + (r + 1.0) ** 2)


def wall_optimum(r: float) -> tuple[float, float]:
    if not r > 1.0:
        raise DomainError(f"wall_optimum needs r > 1, got r={r}.")
    x_max = math.sqrt((r - 1.0) * (r + 1.0))
    return x_max, math.acos(x_max / r)


def wall_far_field(r: float, x: float) -> float:
    return 2.0 * x / r**2


# Disk of unit radius, center offset r, observer at perpendicular distance x.

def disk_solid_angle_many(r, x) -> np.ndarray:
    """Vectorized disk solid angle; callers are responsible for the domain."""
    r, x = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (1.0 + r) ** 2 + x**2
        mc = ((1.0 - r) ** 2 + x**2) / s
        on_rim = np.abs(r - 1.0) < RIM_BRANCH_WIDTH
        ratio = (1.0 - r) / (1.0 + r)
        nc = np.where(on_rim, 1.0, ratio**2)
        elliptic = k_from_complement(mc) + np.where(on_rim, 0.0, ratio * pi_from_complements(nc, mc))
        in_plane = np.where(r < 1.0, 2.0 * np.pi, 0.0)
        head = np.where(on_rim, np.pi, in_plane)
        omega = head - 2.0 * x / np.sqrt(s) * elliptic
        omega = np.where(x == 0.0, in_plane, omega)
    return omega


def disk_solid_angle(r: float, x: float) -> float:
    if not (r >= 0.0 and x >= 0.0) or math.isinf(r) or math.isinf(x):
        raise DomainError(f"Disk coordinates must be finite and nonnegative, got r={r}, x={x}.")
    if x == 0.0 and abs(r - 1.0) < RIM_BRANCH_WIDTH:
        raise DomainError("The point (r, x) = (1, 0) is the branch point of the disk formula.")
    return float(disk_solid_angle_many(r, x))


def disk_solid_angle_general(scene: DiskScene) -> float:
    return disk_solid_angle(scene.r, scene.x)


def disk_far_field(r: float, x: float) -> float:
    return math.pi * x / r**3


def disk_solid_angle_oracle(
    r: float,
    x: float,
    spec: QuadratureSpec = ORACLE_QUADRATURE,
) -> float:
    """Flux of x (x^2 + y^2 + z^2)^(-3/2) through the disk, in polar coordinates about its center."""
    if not (x > 0.0 and r >= 0.0):
        raise DomainError(f"Disk oracle needs x > 0 and r >= 0, got r={r}, x={x}.")

    def integrand(rho: float, t: float) -> float:
        dist2 = x * x + r * r + 2.0 * r * rho * math.cos(t) + rho * rho
        return x * rho / dist2**1.5

    return 2.0 * integrate2d(integrand, (0.0, 1.0), (0.0, math.pi), spec)


# Rectangle in the plane at distance d, observer at the foot of the perpendicular.

def _corner_term(d: float, y: float, z: float) -> float:
    return math.atan(y * z / (d * math.sqrt(d * d + y * y + z * z)))


def _corner_gradient(d: float, y: float, z: float) -> tuple[float, float]:
    reach = math.sqrt(d * d + y * y + z * z)
    return z * d / (reach * (d * d + y * y)), y * d / (reach * (d * d + z * z))


def rect_solid_angle(scene: RectScene) -> float:
    d = scene.d
    return (
        _corner_term(d, scene.y2, scene.z2)
        - _corner_term(d, scene.y1, scene.z2)
        - _corner_term(d, scene.y2, scene.z1)
        + _corner_term(d, scene.y1, scene.z1)
    )


def rect_solid_angle_oracle(scene: RectScene, spec: QuadratureSpec = ORACLE_QUADRATURE) -> float:
    d = scene.d

    def integrand(y: float, z: float) -> float:
        return d / (d * d + y * y + z * z) ** 1.5

    return integrate2d(integrand, (scene.y1, scene.y2), (scene.z1, scene.z2), spec)


def billboard_scene(x: float, r: float, ell: float) -> RectScene:
    """Rectangle of length ell and width 1/ell centered at (r/sqrt2, r/sqrt2)."""
    if not ell >= 1.0:
        raise DomainError(f"Billboard length must satisfy ell >= 1, got {ell}.")
    center = r / math.sqrt(2.0)
    half_length = ell / 2.0
    half_width = 1.0 / (2.0 * ell)
    return RectScene(
        d=x,
        y1=center - half_length,
        y2=center + half_length,
        z1=center - half_width,
        z2=center + half_width,
    )


def billboard_solid_angle(x: float, r: float, ell: float) -> float:
    return rect_solid_angle(billboard_scene(x, r, ell))


def billboard_slope(x: float, r: float, ell: float) -> float:
    """d(Omega)/d(ell) for the billboard, from the corner-term partials."""
    scene = billboard_scene(x, r, ell)
    dy = 0.5
    dz = -1.0 / (2.0 * ell * ell)
    corners = (
        (scene.y2, scene.z2, 1.0, dy, dz),
        (scene.y1, scene.z2, -1.0, -dy, dz),
        (scene.y2, scene.z1, -1.0, dy, -dz),
        (scene.y1, scene.z1, 1.0, -dy, -dz),
    )
    total = 0.0
    for y, z, sign, y_rate, z_rate in corners:
        grad_y, grad_z = _corner_gradient(scene.d, y, z)
        total += sign * (grad_y * y_rate + grad_z * z_rate)
    return total


# Keyhole: segment [-1/2, 1/2] on the y-axis seen from the unit circle or sphere.

def keyhole_angle_circle(theta):
    return np.arctan(KEYHOLE_SLOPE * np.abs(np.cos(theta)))


def keyhole_angle_circle_cosine_law(theta: float) -> float:
    return math.acos(3.0 / math.sqrt(25.0 - 16.0 * math.sin(theta) ** 2))


def keyhole_angle_sphere_many(theta, phi):
    reach = np.sin(theta) * np.sin(phi)
    return np.arctan(KEYHOLE_SLOPE * np.sqrt(np.maximum(0.0, 1.0 - reach * reach)))


def keyhole_angle_sphere(p: SpherePoint) -> float:
    return float(keyhole_angle_sphere_many(p.theta, p.phi))


# Framing square: apparent magnitude of the angle BDC seen from A on the sphere.

def base_vector(a: float) -> np.ndarray:
    """Unit vector C at angle a from B = (1, 0, 0) in the base plane."""
    return np.array([math.cos(a), math.sin(a), 0.0])


def dihedral_angles(points, b, c) -> np.ndarray:
    """Dihedral angle at each row of `points` between the planes through b and c."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    normal_b = np.cross(points, np.asarray(b, dtype=float))
    normal_c = np.cross(points, np.asarray(c, dtype=float))
    sine = np.linalg.norm(np.cross(normal_b, normal_c), axis=-1)
    cosine = np.einsum("ij,ij->i", normal_b, normal_c)
    return np.arctan2(sine, cosine)


def dihedral_angle(a_point, b, c) -> float:
    vectors = [np.asarray(v, dtype=float) for v in (a_point, b, c)]
    for name, vector in zip("ABC", vectors):
        if vector.shape != (3,) or abs(float(np.linalg.norm(vector)) - 1.0) > UNIT_NORM_TOL:
            raise DomainError(f"{name} must be a unit vector in R^3.")
    a_vec, b_vec, c_vec = vectors
    if (
        np.linalg.norm(np.cross(a_vec, b_vec)) <= DEGENERATE_CROSS
        or np.linalg.norm(np.cross(a_vec, c_vec)) <= DEGENERATE_CROSS
    ):
        raise DomainError("A is parallel to B or C; the dihedral angle is undefined.")
    return float(dihedral_angles(a_vec, b_vec, c_vec)[0])


def dihedral_point(x: float, y: float) -> np.ndarray:
    """Observer A at angular distance y from B, turned by pi - x out of the base plane."""
    return np.array([math.cos(y), -math.sin(y) * math.cos(x), math.sin(y) * math.sin(x)])


def dihedral_closed_form(x: float, y: float, a: float) -> float:
    sin_x = math.sin(x)
    if not sin_x > 0.0:
        raise DomainError(f"dihedral_closed_form needs sin(x) > 0, got x={x}.")
    if not 0.0 < a < math.pi:
        raise DomainError(f"Base side must lie in (0, pi), got a={a}.")
    slope = (math.sin(y) * math.cos(a) / math.sin(a) + math.cos(x) * math.cos(y)) / sin_x
    return math.pi / 2.0 - math.atan(slope)
