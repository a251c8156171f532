import math

import numpy as np
import pytest

from apparent_size.errors import DomainError
from apparent_size.perspective import (
    ImagePolygon,
    one_point_strip_image,
    polygon_area,
    project_one_point,
    project_two_point,
    quad_area,
    quad_cell,
    trapezoid_area,
    trapezoid_cell,
    vanishing_points,
)

ROOT2 = math.sqrt(2.0)


def test_project_one_point():
    assert project_one_point(1.0, 0.0) == (0.0, 0.5)
    assert project_one_point(0.0, 0.7) == (0.7, 0.0)
    y, z = project_one_point(1e6, 1.0)
    assert abs(y) < 1e-5 and abs(z - 1.0) < 1e-5
    with pytest.raises(DomainError):
        project_one_point(-1.0, 0.0)


def test_project_two_point():
    assert project_two_point(1.0, 1.0) == (0.0, 0.5)
    y, z = project_two_point(1.0, 2.0)
    assert y == pytest.approx(ROOT2 / 5, abs=1e-15)
    assert z == pytest.approx(3 / 5, abs=1e-15)
    y, z = project_two_point(1.0, 1e6)
    assert abs(y - ROOT2) < 1e-5 and abs(z - 1.0) < 1e-5
    with pytest.raises(DomainError):
        project_two_point(-1.0, -1.0)


def test_polygon_area_basics():
    assert polygon_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1.0
    assert polygon_area([(0, 0), (0, 1), (1, 0)]) == 0.5
    with pytest.raises(DomainError):
        polygon_area([(0, 0), (1, 1)])
    with pytest.raises(DomainError):
        ImagePolygon(((0.0, 0.0),))


def test_closed_form_cell_areas():
    assert trapezoid_area(1) == pytest.approx(5 / 36, abs=1e-16)
    assert trapezoid_area(2) == pytest.approx(7 / 144, abs=1e-16)
    assert quad_area(1) == pytest.approx(ROOT2 / 30, abs=1e-16)
    assert quad_area(2) == pytest.approx(4 * ROOT2 / 210, abs=1e-16)
    assert polygon_area(quad_cell(1)) == pytest.approx(ROOT2 / 30, abs=1e-15)
    with pytest.raises(DomainError):
        trapezoid_area(0)
    with pytest.raises(DomainError):
        quad_area(0)


def test_closed_forms_match_shoelace():
    for k in range(1, 201):
        assert abs(trapezoid_area(k) - polygon_area(trapezoid_cell(k))) < 1e-13
        assert abs(quad_area(k) - polygon_area(quad_cell(k))) < 1e-13


def test_inverse_cube_decay():
    k = 10_000
    assert k**3 * trapezoid_area(k) == pytest.approx(2.0, abs=1e-3)
    assert k**3 * quad_area(k) == pytest.approx(4 * ROOT2, abs=1e-2)


def test_trapezoids_telescope():
    last = 50
    total = sum(trapezoid_area(k) for k in range(1, last + 1))
    assert total == pytest.approx(polygon_area(one_point_strip_image(1, last)), abs=1e-12)
    with pytest.raises(DomainError):
        one_point_strip_image(3, 2)


def _determinant(p, q, s):
    return (q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0])


def test_projections_preserve_collinearity():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        start = rng.uniform(2.0, 10.0, 2)
        direction = rng.uniform(-0.5, 0.5, 2)
        points = [start + t * direction for t in rng.uniform(0.0, 3.0, 3)]
        one = [project_one_point(x, y) for x, y in points]
        two = [project_two_point(m, n) for m, n in points]
        assert abs(_determinant(*one)) < 1e-12
        assert abs(_determinant(*two)) < 1e-12


def test_vanishing_points():
    assert vanishing_points("one-point") == [(0.0, 1.0)]
    assert vanishing_points("two-point") == [(-ROOT2, 1.0), (ROOT2, 1.0)]
    with pytest.raises(DomainError):
        vanishing_points("three-point")
