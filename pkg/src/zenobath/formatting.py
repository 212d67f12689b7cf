"""Deterministic 12-significant-digit text output for CSV and JSON files."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["fmt", "round_trip_12", "write_csv", "write_json"]


def fmt(x: float) -> str:
    """Render a float with 12 significant digits; negative zero becomes 0."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return "%.12g" % x


def round_trip_12(x: float) -> float:
    """Value after passing through the 12-digit text representation."""
    return float(fmt(x))


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Write rows of floats under a fixed header, formatted via fmt."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _normalise(obj):
    if isinstance(obj, float):
        return round_trip_12(obj)
    if isinstance(obj, dict):
        return {k: _normalise(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalise(v) for v in obj]
    return obj


def write_json(path, payload: dict) -> None:
    """Write a JSON document with sorted keys and 12-digit floats."""
    path = Path(path)
    with path.open("w") as fh:
        json.dump(_normalise(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
