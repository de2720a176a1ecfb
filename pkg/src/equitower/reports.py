"""Deterministic report serialization: identical config + seed must produce
byte-identical files, so keys are sorted, floats go through repr, and no
timestamps or environment data are recorded."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path


def _normalize(obj):
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, float):
        return float(repr(obj))
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


def stable_json_dumps(obj) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2, separators=(",", ": "))


def write_report(path: str | Path, obj) -> None:
    Path(path).write_text(stable_json_dumps(obj) + "\n", encoding="utf-8")


def read_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
