from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .errors import DomainError


TABLE_COLUMNS: dict[str, list[str]] = {
    "disk_omega": ["r[-]", "x[-]", "omega[sr]"],
    "disk_curve": ["r[-]", "x[-]", "omega[sr]", "far_field[sr]"],
    "disk_xmax": [
        "r[-]",
        "xmax[-]",
        "omega_max[sr]",
        "asymptote[-]",
        "rough[-]",
        "at_boundary[-]",
    ],
    "rect_omega": ["d[-]", "y1[-]", "y2[-]", "z1[-]", "z2[-]", "omega[sr]", "oracle[sr]"],
    "rect_lmax": [
        "x[-]",
        "r[-]",
        "lmax[-]",
        "omega_max[sr]",
        "margin[-]",
        "at_boundary[-]",
        "spills[-]",
    ],
    "spill": ["x[-]", "r_threshold[-]", "lmax[-]"],
    "wall": ["r[-]", "x[-]", "angle[rad]", "far_field[rad]"],
    "wall_optimum": ["r[-]", "xmax[-]", "angle_max[rad]"],
    "keyhole_moments": ["model", "method", "mean[rad]", "second[rad^2]", "variance[rad^2]"],
    "keyhole_pdf": ["omega[rad]", "pdf[1/rad]", "cdf[-]"],
    "dihedral": ["a[rad]", "method", "mean[rad]", "second[rad^2]"],
    "perspective": ["k[-]", "area[-]", "shoelace[-]", "k3_area[-]"],
    "mc_angle": [
        "experiment",
        "n_samples[-]",
        "mean[rad]",
        "se_mean[rad]",
        "second[rad^2]",
        "se_second[rad^2]",
        "seed[-]",
        "resampled[-]",
    ],
    "mc_disk": [
        "experiment",
        "n_samples[-]",
        "mean[sr]",
        "se_mean[sr]",
        "second[sr^2]",
        "se_second[sr^2]",
        "seed[-]",
        "resampled[-]",
    ],
    "verify": [
        "rule_id",
        "severity",
        "status",
        "observed[-]",
        "reference[-]",
        "tolerance[-]",
        "details",
    ],
}

# unit suffix -> (degree suffix, factor)
DEGREE_UNITS: dict[str, tuple[str, float]] = {
    "[rad]": ("[deg]", 180.0 / math.pi),
    "[rad^2]": ("[deg^2]", (180.0 / math.pi) ** 2),
    "[1/rad]": ("[1/deg]", math.pi / 180.0),
}


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: Path | None = None
    precision: int = 15
    degrees: bool = False

    def __post_init__(self) -> None:
        if self.format not in {"csv", "json"}:
            raise DomainError(f"Output format must be csv or json, got {self.format!r}.")
        if not 6 <= self.precision <= 17:
            raise DomainError(f"Precision must lie in [6, 17], got {self.precision}.")


@dataclass
class Table:
    name: str
    rows: list[dict[str, Any]]
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return TABLE_COLUMNS[self.name]


def _rows_to_dataframe(table: Table) -> pd.DataFrame:
    columns = table.columns
    if not table.rows:
        return pd.DataFrame(columns=columns)

    normalized_rows: list[dict[str, Any]] = []
    for row in table.rows:
        normalized = {col: row.get(col) for col in columns}
        normalized_rows.append(normalized)

    frame = pd.DataFrame(normalized_rows, columns=columns)
    for col in columns:
        if frame[col].dtype == bool:
            frame[col] = frame[col].astype(int)
    return frame


def to_degrees(frame: pd.DataFrame) -> pd.DataFrame:
    converted = frame.copy()
    renames: dict[str, str] = {}
    for col in frame.columns:
        for suffix, (replacement, factor) in DEGREE_UNITS.items():
            if col.endswith(suffix):
                converted[col] = frame[col] * factor
                renames[col] = col[: -len(suffix)] + replacement
    return converted.rename(columns=renames)


def render_frame(table: Table, spec: OutputSpec) -> pd.DataFrame:
    frame = _rows_to_dataframe(table)
    if spec.degrees:
        frame = to_degrees(frame)
    return frame


def _plain(value: Any, precision: int) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{precision}g}")
    if isinstance(value, (list, tuple)):
        return [_plain(item, precision) for item in value]
    return value


def format_csv(table: Table, spec: OutputSpec) -> str:
    frame = render_frame(table, spec)
    return frame.to_csv(index=False, float_format=f"%.{spec.precision}g", lineterminator="\n")


def format_json(table: Table, spec: OutputSpec) -> str:
    frame = render_frame(table, spec)
    payload = {
        "params": {key: _plain(value, spec.precision) for key, value in table.params.items()},
        "columns": list(frame.columns),
        "rows": [
            [_plain(value, spec.precision) for value in record]
            for record in frame.itertuples(index=False, name=None)
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_table(table: Table, spec: OutputSpec) -> None:
    text = format_json(table, spec) if spec.format == "json" else format_csv(table, spec)
    if spec.path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with spec.path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(text)
