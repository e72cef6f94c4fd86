"""Point-set and report serialization.

Point sets travel as JSON {"dim": d, "mode": "float"|"exact", "points":
[...]} with exact coordinates encoded as "p/q" strings, or as plain CSV
(one point per row, floating only). Reports are emitted with floats
rendered at 17 significant digits so every value round-trips.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .geometry import EXACT_MODE, FLOAT_MODE, PointSet


def pointset_to_dict(s: PointSet) -> dict:
    if s.mode == EXACT_MODE:
        points = [[str(c) for c in row] for row in s.points]
    else:
        points = [list(row) for row in s.points]
    return {"dim": s.dim, "mode": s.mode, "points": points}


def pointset_from_dict(obj: dict) -> PointSet:
    if not isinstance(obj, dict):
        raise ValueError("point set JSON must be an object")
    try:
        dim = obj["dim"]
        mode = obj.get("mode", FLOAT_MODE)
        rows = obj["points"]
    except KeyError as e:
        raise ValueError(f"point set JSON missing key {e}")
    if not isinstance(rows, list) or not rows:
        raise ValueError("points must be a nonempty list")
    parsed = []
    for row in rows:
        if not isinstance(row, list):
            raise ValueError("each point must be a list of coordinates")
        if mode == EXACT_MODE:
            coords = []
            for c in row:
                if isinstance(c, str):
                    coords.append(Fraction(c))
                elif isinstance(c, int) and not isinstance(c, bool):
                    coords.append(Fraction(c))
                else:
                    raise ValueError(
                        "exact mode coordinates must be integers or 'p/q' strings"
                    )
            parsed.append(tuple(coords))
        else:
            coords = []
            for c in row:
                if isinstance(c, bool) or not isinstance(c, (int, float, str)):
                    raise ValueError("coordinates must be numbers")
                coords.append(float(Fraction(c)) if isinstance(c, str) else float(c))
            parsed.append(tuple(coords))
    return PointSet(dim=int(dim), points=tuple(parsed), mode=mode)


def load_pointset(text: str) -> PointSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid JSON: {e}")
    return pointset_from_dict(obj)


def load_pointset_csv(text: str) -> PointSet:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append(tuple(float(tok) for tok in line.replace(",", " ").split()))
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric coordinate")
    if not rows:
        raise ValueError("empty point CSV")
    width = len(rows[0])
    for i, r in enumerate(rows, 1):
        if len(r) != width:
            raise ValueError(f"ragged CSV: row {i} has {len(r)} columns, expected {width}")
    return PointSet(dim=width, points=tuple(rows), mode=FLOAT_MODE)


def load_matrix_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.replace(",", " ").split()])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric entry")
    if not rows:
        raise ValueError("empty matrix CSV")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix CSV")
    return np.array(rows, dtype=float)


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("reports may not contain NaN or infinity")
    return format(x, ".17g")


def dumps_report(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits (round-trip safe)."""
    return _dumps(_plain(obj), indent, 0) + "\n"


def _plain(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def _dumps(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1)) if indent else ""
    endpad = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    nl = "\n" if indent else ""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_dumps(v, indent, level + 1)}"
            for k, v in obj.items()
        ]
        return "{" + nl + sep.join(items) + nl + endpad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_dumps(v, indent, level + 1)}" for v in obj]
        return "[" + nl + sep.join(items) + nl + endpad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
