from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import yaml


DEFAULT_CONFIG: dict[str, Any] = {
    "quadrature": {
        "abs_tol": 1e-12,
        "rel_tol": 1e-12,
        "max_subdivisions": 10_000,
    },
    "optimize": {
        "tol": 1e-10,
    },
    "montecarlo": {
        "seed": 1,
        "samples": 1_000_000,
        "substreams": 1,
        "workers": 1,
        "batch_size": 1_000_000,
    },
    "output": {
        "format": "csv",
        "precision": 15,
    },
    "validation": {
        "critical_rules": [
            "wall_optimum",
            "disk_inverse_cube",
            "disk_xmax_asymptote",
            "billboard_boundary",
            "billboard_nine_eighths",
            "billboard_five_quarters",
            "spill_threshold",
            "circle_moments_closed",
            "sphere_moments_quad",
            "dihedral_right_quad",
            "strip_areas",
        ],
    },
}

SEED_ENV_VAR = "SUBTENSE_SEED"


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged: dict[str, Any] = dict(base)
    for key, value in override.items():
        if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Path | None) -> dict[str, Any]:
    data: dict[str, Any] = {}
    if config_path is not None and config_path.exists():
        with config_path.open("r", encoding="utf-8") as handle:
            parsed = yaml.safe_load(handle) or {}
            if isinstance(parsed, dict):
                data = parsed
    return _deep_merge(DEFAULT_CONFIG, data)


def default_seed(config: dict[str, Any], environ: dict[str, str] | None = None) -> int:
    """Seed for Monte Carlo runs: SUBTENSE_SEED if set, else the configured seed."""
    env = os.environ if environ is None else environ
    raw = env.get(SEED_ENV_VAR)
    if raw is not None and raw.strip():
        try:
            return int(raw.strip())
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from exc
    return int(config.get("montecarlo", {}).get("seed", 1))
