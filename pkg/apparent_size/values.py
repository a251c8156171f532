from __future__ import annotations

import math
import re

import numpy as np

from .errors import DomainError


# "1.25", "9/8", "pi", "pi/3", "2pi/3", "-0.5e-3"
NUMBER_TOKEN_PATTERN = re.compile(
    r"^(?P<coef>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?"
    r"(?P<pi>pi)?"
    r"(?:/(?P<den>\d+\.?\d*(?:[eE][-+]?\d+)?))?$",
    re.IGNORECASE,
)
RANGE_PATTERN = re.compile(r"^(?P<first>[-+]?\d+)\.\.(?P<last>[-+]?\d+)$")


def parse_number_value(raw: str | None) -> float | None:
    """Parse one scalar; None when the token is not a number."""
    if raw is None:
        return None
    cleaned = str(raw).strip().replace(" ", "").replace("*", "")
    if cleaned.lower() in {"sqrt2", "sqrt(2)"}:
        return math.sqrt(2.0)
    match = NUMBER_TOKEN_PATTERN.match(cleaned)
    if not match or not (match.group("coef") or match.group("pi")):
        return None

    coef = match.group("coef")
    value = float(coef) if coef else 1.0
    if match.group("pi"):
        value *= math.pi
    den = match.group("den")
    if den is not None:
        divisor = float(den)
        if divisor == 0.0:
            return None
        value /= divisor
    return value


def _require_number(token: str) -> float:
    value = parse_number_value(token)
    if value is None:
        raise DomainError(f"Not a number: {token!r}")
    return value


def _parse_grid(token: str) -> list[float]:
    parts = token.split(":")
    if len(parts) != 3:
        raise DomainError(f"Grid must read start:stop:count, got {token!r}")
    start, stop = _require_number(parts[0]), _require_number(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise DomainError(f"Grid count must be an integer, got {parts[2]!r}") from exc
    if count < 1:
        raise DomainError(f"Grid count must be at least 1, got {count}")
    return [float(v) for v in np.linspace(start, stop, count)]


def parse_value_list(raw: str) -> list[float]:
    """Expand "0.8,0.9,1", "1..5" and "start:stop:count" (mixable) into values."""
    tokens = [token.strip() for token in str(raw).split(",") if token.strip()]
    if not tokens:
        raise DomainError(f"No values in {raw!r}")

    values: list[float] = []
    for token in tokens:
        range_match = RANGE_PATTERN.match(token)
        if range_match:
            first, last = int(range_match.group("first")), int(range_match.group("last"))
            if last < first:
                raise DomainError(f"Empty range {token!r}")
            values.extend(float(k) for k in range(first, last + 1))
        elif ":" in token:
            values.extend(_parse_grid(token))
        else:
            values.append(_require_number(token))
    return values


def parse_int_list(raw: str) -> list[int]:
    values = parse_value_list(raw)
    if any(not float(v).is_integer() for v in values):
        raise DomainError(f"Expected integers, got {raw!r}")
    return [int(v) for v in values]
