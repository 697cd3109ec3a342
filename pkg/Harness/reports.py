#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Report serialization.

JSON reports are written with sorted keys and a trailing newline, so equal
reports are equal bytes. CSV reports hold the ``rows`` table of a report,
or ``key,value`` lines for reports without one.
"""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np
import petname


def default_run_name(command: str, fmt: str) -> str:
    return f"{command.replace(' ', '-')}-{petname.Generate(3, '-')}.{fmt}"


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset, tuple)):
        return sorted(value) if isinstance(value, (set, frozenset)) else list(value)
    raise TypeError(f"Cannot serialize {type(value).__name__} in a report.")


def _finite(value: Any) -> Any:
    """Replaces inf and nan, which JSON cannot carry, by strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {key: _finite(v) for key, v in value.items()}
    if isinstance(value, list):
        return [_finite(v) for v in value]
    return value


def to_json(report: dict[str, Any]) -> str:
    plain = json.loads(json.dumps(report, default=_default))
    return json.dumps(_finite(plain), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _flatten(prefix: str, value: Any, out: dict[str, Any]):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], out)
    elif isinstance(value, (list, tuple)):
        out[prefix] = json.dumps(value, default=_default, sort_keys=True)
    else:
        out[prefix] = value


def to_csv(report: dict[str, Any]) -> str:
    buffer = io.StringIO()
    rows = report.get("rows")
    if rows:
        flat_rows = []
        for row in rows:
            flat: dict[str, Any] = {}
            _flatten("", row, flat)
            flat_rows.append(flat)
        columns = sorted({key for row in flat_rows for key in row})
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat_rows)
    else:
        flat = {}
        _flatten("", report, flat)
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key in sorted(flat):
            writer.writerow([key, flat[key]])
    return buffer.getvalue()


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"Unknown report format {fmt!r}.")


def write_report(report: dict[str, Any], path: str, fmt: str) -> str:
    text = render(report, fmt)
    with open(path, 'w', newline='') as file:
        file.write(text)
    return path
