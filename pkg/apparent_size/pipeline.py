from __future__ import annotations

import logging
import math
from typing import Any, Callable

from .geomprob import (
    RandomStream,
    circle_moments_closed,
    circle_moments_quad,
    circle_pdf,
    dihedral_m2_pi3,
    dihedral_moments_quad,
    dihedral_right_moments_closed,
    mc_circle,
    mc_dihedral_side,
    mc_disk_from_sphere,
    mc_sphere,
    sphere_moments_quad,
    sphere_pdf,
)
from .optimize import (
    DEFAULT_TOL,
    disk_xmax,
    disk_xmax_asymptote,
    disk_xmax_rough,
    rect_lmax,
    spill_threshold,
    wall_xmax,
)
from .perspective import (
    polygon_area,
    quad_area,
    quad_cell,
    trapezoid_area,
    trapezoid_cell,
    vanishing_points,
)
from .specfun import QuadratureSpec
from .subtense import (
    RectScene,
    WallScene,
    disk_far_field,
    disk_solid_angle,
    rect_solid_angle,
    rect_solid_angle_oracle,
    wall_angle,
    wall_far_field,
)
from .validate import run_verification
from .writers import OutputSpec, Table, write_table

logger = logging.getLogger(__name__)

DISK_CURVE_GRID = [4.0 * i / 80 for i in range(81)]
MC_EXPERIMENTS = ("circle", "sphere", "dihedral", "disk")


def disk_omega_table(r_values: list[float], x_values: list[float]) -> Table:
    rows = [
        {"r[-]": r, "x[-]": x, "omega[sr]": disk_solid_angle(r, x)}
        for r in r_values
        for x in x_values
    ]
    return Table("disk_omega", rows, {"r": r_values, "x": x_values})


def disk_curve_table(r_values: list[float], x_values: list[float] | None = None) -> Table:
    """Omega(x) families for fixed r, one row per (r, x)."""
    grid = DISK_CURVE_GRID if x_values is None else x_values
    rows = []
    for r in r_values:
        for x in grid:
            if r == 1.0 and x == 0.0:
                continue
            rows.append(
                {
                    "r[-]": r,
                    "x[-]": x,
                    "omega[sr]": disk_solid_angle(r, x),
                    "far_field[sr]": disk_far_field(r, x),
                }
            )
    return Table("disk_curve", rows, {"r": r_values, "x": grid})


def disk_xmax_table(r_values: list[float], tol: float = DEFAULT_TOL) -> Table:
    rows = []
    for r in r_values:
        result = disk_xmax(r, tol)
        rows.append(
            {
                "r[-]": r,
                "xmax[-]": result.argmax,
                "omega_max[sr]": result.value,
                "asymptote[-]": disk_xmax_asymptote(r),
                "rough[-]": disk_xmax_rough(r),
                "at_boundary[-]": result.at_boundary,
            }
        )
    return Table("disk_xmax", rows, {"r": r_values, "tol": tol})


def rect_omega_table(
    d: float,
    y_range: tuple[float, float],
    z_range: tuple[float, float],
    spec: QuadratureSpec | None = None,
) -> Table:
    scene = RectScene(d=d, y1=y_range[0], y2=y_range[1], z1=z_range[0], z2=z_range[1])
    oracle = rect_solid_angle_oracle(scene, spec) if spec is not None else math.nan
    row = {
        "d[-]": d,
        "y1[-]": scene.y1,
        "y2[-]": scene.y2,
        "z1[-]": scene.z1,
        "z2[-]": scene.z2,
        "omega[sr]": rect_solid_angle(scene),
        "oracle[sr]": oracle,
    }
    return Table("rect_omega", [row], {"oracle": spec is not None})


def rect_lmax_table(x_values: list[float], r_values: list[float], tol: float = DEFAULT_TOL) -> Table:
    rows = []
    for x in x_values:
        for r in r_values:
            result = rect_lmax(x, r, tol)
            rows.append(
                {
                    "x[-]": x,
                    "r[-]": r,
                    "lmax[-]": result.argmax,
                    "omega_max[sr]": result.value,
                    "margin[-]": r / math.sqrt(2.0) - result.argmax / 2.0,
                    "at_boundary[-]": result.at_boundary,
                    "spills[-]": result.spills,
                }
            )
    return Table("rect_lmax", rows, {"x": x_values, "r": r_values, "tol": tol})


def spill_table(x_values: list[float], tol: float = DEFAULT_TOL) -> Table:
    rows = []
    for x in x_values:
        threshold = spill_threshold(tol, x)
        rows.append(
            {
                "x[-]": x,
                "r_threshold[-]": threshold,
                "lmax[-]": rect_lmax(x, threshold, tol).argmax,
            }
        )
    return Table("spill", rows, {"x": x_values, "tol": tol})


def wall_table(r_values: list[float], x_values: list[float] | None, tol: float = DEFAULT_TOL) -> Table:
    if x_values is None:
        rows = []
        for r in r_values:
            result = wall_xmax(r, tol)
            rows.append({"r[-]": r, "xmax[-]": result.argmax, "angle_max[rad]": result.value})
        return Table("wall_optimum", rows, {"r": r_values, "tol": tol})

    rows = [
        {
            "r[-]": r,
            "x[-]": x,
            "angle[rad]": wall_angle(WallScene(r=r, x=x)),
            "far_field[rad]": wall_far_field(r, x),
        }
        for r in r_values
        for x in x_values
    ]
    return Table("wall", rows, {"r": r_values, "x": x_values})


def keyhole_moments_table() -> Table:
    rows = []
    for model, method, moments in (
        ("circle", "closed", circle_moments_closed()),
        ("circle", "quadrature", circle_moments_quad()),
        ("sphere", "quadrature", sphere_moments_quad()),
    ):
        mean, second = moments
        rows.append(
            {
                "model": model,
                "method": method,
                "mean[rad]": mean,
                "second[rad^2]": second,
                "variance[rad^2]": second - mean**2,
            }
        )
    return Table("keyhole_moments", rows)


def keyhole_pdf_table(model: str, omega_values: list[float]) -> Table:
    density = circle_pdf() if model == "circle" else sphere_pdf()
    rows = [
        {
            "omega[rad]": omega,
            "pdf[1/rad]": density(omega),
            "cdf[-]": density.probability(density.support_lo, omega),
        }
        for omega in omega_values
    ]
    return Table("keyhole_pdf", rows, {"model": model, "support_hi": density.support_hi})


def dihedral_table(a_values: list[float]) -> Table:
    rows = []
    for a in a_values:
        mean, second = dihedral_moments_quad(a)
        rows.append({"a[rad]": a, "method": "quadrature", "mean[rad]": mean, "second[rad^2]": second})
        if math.isclose(a, math.pi / 2.0, rel_tol=0.0, abs_tol=1e-15):
            closed_mean, closed_second = dihedral_right_moments_closed()
            rows.append({"a[rad]": a, "method": "closed", "mean[rad]": closed_mean, "second[rad^2]": closed_second})
        if math.isclose(a, math.pi / 3.0, rel_tol=0.0, abs_tol=1e-15):
            rows.append({"a[rad]": a, "method": "identity", "mean[rad]": a, "second[rad^2]": dihedral_m2_pi3()})
    return Table("dihedral", rows, {"a": a_values})


def perspective_table(strip: str, k_values: list[int]) -> Table:
    if strip == "one-point":
        closed, cell = trapezoid_area, trapezoid_cell
    else:
        closed, cell = quad_area, quad_cell
    rows = []
    for k in k_values:
        area = closed(k)
        rows.append(
            {
                "k[-]": k,
                "area[-]": area,
                "shoelace[-]": polygon_area(cell(k)),
                "k3_area[-]": float(k) ** 3 * area,
            }
        )
    horizon = [list(point) for point in vanishing_points(strip)]
    return Table("perspective", rows, {"strip": strip, "k": k_values, "vanishing_points": horizon})


def mc_table(
    experiment: str,
    n: int,
    seed: int,
    *,
    a: float = math.pi / 2.0,
    substreams: int = 1,
    workers: int = 1,
    batch_size: int = 1_000_000,
) -> Table:
    stream = RandomStream(seed)
    options = {"substreams": substreams, "workers": workers, "batch_size": batch_size}
    runners: dict[str, Callable[[], Any]] = {
        "circle": lambda: mc_circle(n, stream, **options),
        "sphere": lambda: mc_sphere(n, stream, **options),
        "dihedral": lambda: mc_dihedral_side(a, n, stream, **options),
        "disk": lambda: mc_disk_from_sphere(n, stream, **options),
    }
    report = runners[experiment]()
    unit = "sr" if experiment == "disk" else "rad"
    row = {
        "experiment": experiment,
        "n_samples[-]": report.n_samples,
        f"mean[{unit}]": report.mean,
        f"se_mean[{unit}]": report.se_mean,
        f"second[{unit}^2]": report.second_moment,
        f"se_second[{unit}^2]": report.se_second,
        "seed[-]": report.seed,
        "resampled[-]": report.resampled,
    }
    params: dict[str, Any] = {"samples": n, "seed": seed, "substreams": substreams}
    if experiment == "dihedral":
        params["a"] = a
    name = "mc_disk" if experiment == "disk" else "mc_angle"
    return Table(name, [row], params)


def verify_table(config: dict[str, Any], seed: int | None = None) -> tuple[Table, bool]:
    report, critical_failed = run_verification(config, seed)
    return Table("verify", report), critical_failed


def run_pipeline(
    build: Callable[[dict[str, Any]], Table | tuple[Table, bool]],
    config: dict[str, Any],
    output: OutputSpec,
) -> int:
    """Build one table under the config and write it; 1 when a critical check failed."""
    built = build(config)
    critical_failed = False
    if isinstance(built, tuple):
        table, critical_failed = built
    else:
        table = built
    logger.debug("Built table %s with %d rows", table.name, len(table.rows))
    write_table(table, output)
    return 1 if critical_failed else 0
