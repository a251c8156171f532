from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import pipeline
from .config import default_seed, load_config
from .errors import ConvergenceError, DomainError
from .specfun import QuadratureSpec
from .subtense import KEYHOLE_SLOPE
from .values import parse_int_list, parse_number_value, parse_value_list
from .writers import OutputSpec, Table

logger = logging.getLogger(__name__)

Builder = Callable[[dict[str, Any]], "Table | tuple[Table, bool]"]


def _number(raw: str) -> float:
    value = parse_number_value(raw)
    if value is None:
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}")
    return value


def _pair(raw: str) -> tuple[float, float]:
    values = parse_value_list(raw)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two values 'lo,hi', got {raw!r}")
    return values[0], values[1]


def _values(raw: str) -> list[float]:
    try:
        return parse_value_list(raw)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _ints(raw: str) -> list[int]:
    try:
        return parse_int_list(raw)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None, help="Output format (default: config, csv).")
    common.add_argument("--output", default=None, help="Output file path (default: standard output).")
    common.add_argument("--precision", type=int, default=None, help="Significant digits, 6..17 (default: 15).")
    common.add_argument("--degrees", action="store_true", help="Show angles in degrees instead of radians.")
    common.add_argument("--config", default="config.yaml", help="YAML config path.")
    common.add_argument("--verbose", action="store_true", help="Log debug records to stderr.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apparent",
        description="Apparent sizes of walls, disks, billboards and angles: tables for every computation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    cmd = add("disk-omega", "Solid angle of the unit disk for each (r, x).")
    cmd.add_argument("--r", type=_values, required=True, help="Lateral offsets, e.g. 0.5,1,2 or 0:3:10.")
    cmd.add_argument("--x", type=_values, required=True, help="Observer heights.")

    cmd = add("disk-curve", "Omega(x) curves for fixed r with the inverse-cube far field.")
    cmd.add_argument("--r", type=_values, default=[0.8, 0.9, 1.0, 1.1], help="Curve offsets (default 0.8,0.9,1,1.1).")
    cmd.add_argument("--x", type=_values, default=None, help="Height grid (default 0:4:81).")

    cmd = add("disk-xmax", "Height at which the disk looks largest.")
    cmd.add_argument("--r", type=_values, required=True, help="Offsets r > 1.")
    cmd.add_argument("--tol", type=float, default=None, help="Optimizer tolerance.")

    cmd = add("rect-omega", "Solid angle of an axis-aligned rectangle at distance d.")
    cmd.add_argument("--d", type=_number, required=True, help="Distance to the rectangle plane.")
    cmd.add_argument("--y", type=_pair, required=True, help="Horizontal extent 'y1,y2'.")
    cmd.add_argument("--z", type=_pair, required=True, help="Vertical extent 'z1,z2'.")
    cmd.add_argument("--oracle", action="store_true", help="Also integrate the solid angle numerically.")

    cmd = add("rect-lmax", "Billboard length that looks largest from the street corner.")
    cmd.add_argument("--x", type=_values, default=[1.0], help="Billboard heights (default 1).")
    cmd.add_argument("--r", type=_values, required=True, help="Street widths r >= 1.")
    cmd.add_argument("--tol", type=float, default=None, help="Optimizer tolerance.")

    cmd = add("spill", "Street width beyond which the optimal billboard crosses the far curb.")
    cmd.add_argument("--x", type=_values, default=[1.0], help="Billboard heights (default 1).")
    cmd.add_argument("--tol", type=float, default=None, help="Root tolerance.")

    cmd = add("wall", "Angle of the wall segment [r-1, r+1]; its optimum when --x is omitted.")
    cmd.add_argument("--r", type=_values, required=True, help="Wall center heights r > 1.")
    cmd.add_argument("--x", type=_values, default=None, help="Observer distances x > 0.")
    cmd.add_argument("--tol", type=float, default=None, help="Optimizer tolerance.")

    add("keyhole-moments", "Mean and second moment of the keyhole angle.")

    cmd = add("keyhole-pdf", "Keyhole density and distribution function on a grid.")
    cmd.add_argument("--model", choices=["circle", "sphere"], default="circle", help="Observer on circle or sphere.")
    cmd.add_argument("--omega", type=_values, default=None, help="Angles (default 51 points over the support).")

    cmd = add("dihedral", "Moments of the apparent magnitude of a base angle a.")
    cmd.add_argument("--a", type=_values, default=[math.pi / 2.0, math.pi / 3.0], help="Base sides (default pi/2,pi/3).")

    cmd = add("perspective", "Strip-cell areas in one-point or two-point perspective.")
    cmd.add_argument("--strip", choices=["one-point", "two-point"], default="one-point", help="Which strip.")
    cmd.add_argument("--k", type=_ints, default=list(range(1, 11)), help="Cell indices, e.g. 1..5 (default 1..10).")

    cmd = add("mc", "Monte Carlo moments, reproducible per seed.")
    cmd.add_argument("--experiment", choices=list(pipeline.MC_EXPERIMENTS), default="circle", help="What to sample.")
    cmd.add_argument("--a", type=_number, default=math.pi / 2.0, help="Base side for the dihedral experiment.")
    cmd.add_argument("--seed", type=int, default=None, help="Seed (default: SUBTENSE_SEED, then config).")
    cmd.add_argument("--samples", type=int, default=None, help="Sample count (default: config).")
    cmd.add_argument("--substreams", type=int, default=None, help="Independent substreams merged in order.")
    cmd.add_argument("--workers", type=int, default=None, help="Worker threads.")
    cmd.add_argument("--batch-size", type=int, default=None, help="Samples drawn per batch.")

    cmd = add("verify", "Recompute every published constant and report PASS/FAIL.")
    cmd.add_argument("--seed", type=int, default=None, help="Seed for the Monte Carlo rule.")

    return parser


def _pick(value: Any, config: dict[str, Any], section: str, key: str) -> Any:
    return value if value is not None else config.get(section, {}).get(key)


def _builder(args: argparse.Namespace) -> Builder:
    command = args.command

    def tol(config: dict[str, Any]) -> float:
        return float(_pick(getattr(args, "tol", None), config, "optimize", "tol"))

    if command == "disk-omega":
        return lambda config: pipeline.disk_omega_table(args.r, args.x)
    if command == "disk-curve":
        return lambda config: pipeline.disk_curve_table(args.r, args.x)
    if command == "disk-xmax":
        return lambda config: pipeline.disk_xmax_table(args.r, tol(config))
    if command == "rect-omega":
        return lambda config: pipeline.rect_omega_table(
            args.d,
            args.y,
            args.z,
            QuadratureSpec.from_config(config) if args.oracle else None,
        )
    if command == "rect-lmax":
        return lambda config: pipeline.rect_lmax_table(args.x, args.r, tol(config))
    if command == "spill":
        return lambda config: pipeline.spill_table(args.x, tol(config))
    if command == "wall":
        return lambda config: pipeline.wall_table(args.r, args.x, tol(config))
    if command == "keyhole-moments":
        return lambda config: pipeline.keyhole_moments_table()
    if command == "keyhole-pdf":
        omega = args.omega
        if omega is None:
            top = math.atan(KEYHOLE_SLOPE)
            omega = [top * i / 50 for i in range(51)]
        return lambda config: pipeline.keyhole_pdf_table(args.model, omega)
    if command == "dihedral":
        return lambda config: pipeline.dihedral_table(args.a)
    if command == "perspective":
        return lambda config: pipeline.perspective_table(args.strip, args.k)
    if command == "mc":
        def build_mc(config: dict[str, Any]) -> Table:
            seed = args.seed if args.seed is not None else default_seed(config)
            return pipeline.mc_table(
                args.experiment,
                int(_pick(args.samples, config, "montecarlo", "samples")),
                seed,
                a=args.a,
                substreams=int(_pick(args.substreams, config, "montecarlo", "substreams")),
                workers=int(_pick(args.workers, config, "montecarlo", "workers")),
                batch_size=int(_pick(args.batch_size, config, "montecarlo", "batch_size")),
            )

        return build_mc
    if command == "verify":
        return lambda config: pipeline.verify_table(
            config, args.seed if args.seed is not None else default_seed(config)
        )
    raise DomainError(f"Unknown command {command!r}")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    config_path = Path(args.config) if args.config else None
    try:
        config = load_config(config_path)
        output = OutputSpec(
            format=str(_pick(args.format, config, "output", "format")),
            path=Path(args.output) if args.output else None,
            precision=int(_pick(args.precision, config, "output", "precision")),
            degrees=bool(args.degrees),
        )
        return pipeline.run_pipeline(_builder(args), config, output)
    except (DomainError, ValueError) as exc:
        print(f"Failed: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"Failed: {exc}", file=sys.stderr)
        return 1
    except PermissionError as exc:
        print(f"Failed: {exc}. Check that the output path is writable.", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"Failed: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
