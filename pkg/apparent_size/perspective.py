from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError

ROOT2 = math.sqrt(2.0)

Point = tuple[float, float]


@dataclass(frozen=True)
class ImagePolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise DomainError(f"A polygon needs at least 3 vertices, got {len(self.vertices)}.")

    @classmethod
    def of(cls, points: Iterable[Point]) -> "ImagePolygon":
        return cls(tuple((float(y), float(z)) for y, z in points))


def project_one_point(x: float, y: float) -> Point:
    if not x > -1.0:
        raise DomainError(f"One-point projection needs x > -1, got x={x}.")
    depth = 1.0 + x
    return y / depth, x / depth


def project_two_point(m: float, n: float) -> Point:
    depth = 2.0 + m + n
    if not depth > 0.0:
        raise DomainError(f"Two-point projection needs m + n > -2, got m={m}, n={n}.")
    return ROOT2 * (n - m) / depth, (m + n) / depth


def polygon_area(polygon: ImagePolygon | Iterable[Point]) -> float:
    """Absolute shoelace area of an ordered simple polygon."""
    if not isinstance(polygon, ImagePolygon):
        polygon = ImagePolygon.of(polygon)
    coords = np.asarray(polygon.vertices, dtype=float)
    # shift to the first vertex; the cells are tiny next to their coordinates
    coords = coords - coords[0]
    y, z = coords[:, 0], coords[:, 1]
    return 0.5 * abs(float(np.dot(y, np.roll(z, -1)) - np.dot(z, np.roll(y, -1))))


def _check_cell_index(k: int) -> None:
    if k < 1:
        raise DomainError(f"Cell index must be at least 1, got k={k}.")


def trapezoid_area(k: int) -> float:
    _check_cell_index(k)
    return (3.0 + 2.0 * k) / ((1.0 + k) ** 2 * (2.0 + k) ** 2)


def quad_area(k: int) -> float:
    _check_cell_index(k)
    return 4.0 * ROOT2 / ((3.0 + k) * (4.0 + k) * (5.0 + k))


def trapezoid_cell(k: int) -> ImagePolygon:
    """Image of [k, k+1] x [-1, 1], the k-th cell of the center strip."""
    _check_cell_index(k)
    corners = ((k, -1.0), (k + 1, -1.0), (k + 1, 1.0), (k, 1.0))
    return ImagePolygon.of(project_one_point(x, y) for x, y in corners)


def quad_cell(k: int) -> ImagePolygon:
    """Image of the lattice cell m in [1, 2], n in [k, k+1] of the right strip."""
    _check_cell_index(k)
    corners = ((1.0, k), (2.0, k), (2.0, k + 1), (1.0, k + 1))
    return ImagePolygon.of(project_two_point(m, n) for m, n in corners)


def one_point_strip_image(k_first: int, k_last: int) -> ImagePolygon:
    _check_cell_index(k_first)
    if k_last < k_first:
        raise DomainError(f"Strip needs k_last >= k_first, got {k_first}..{k_last}.")
    corners = ((k_first, -1.0), (k_last + 1, -1.0), (k_last + 1, 1.0), (k_first, 1.0))
    return ImagePolygon.of(project_one_point(x, y) for x, y in corners)


def vanishing_points(kind: str) -> list[Point]:
    if kind == "one-point":
        return [(0.0, 1.0)]
    if kind == "two-point":
        return [(-ROOT2, 1.0), (ROOT2, 1.0)]
    raise DomainError(f"Unknown perspective kind {kind!r}; expected 'one-point' or 'two-point'.")
