# Result Records
"""
Writers for the result JSON, the bench CSV and the scaling-slope fit.

Floats are written with repr, which round-trips binary64 exactly.
"""

import csv
import dataclasses
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, NamedTuple, Union

import numpy as np

from lfun.engine.params import PipelineResult


CSV_HEADER = ["T", "mode", "wall_seconds", "jet_evals", "groups", "value_re", "value_im"]

PathLike = Union[str, Path]


class BenchRow(NamedTuple):
    T: float
    mode: str
    wall_seconds: float
    jet_evals: int
    groups: int
    value: complex


def make_json_safe(obj: Any) -> Any:
    """
    Recursively convert dataclasses, numpy scalars and Paths into plain
    JSON types.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = dataclasses.asdict(obj)
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    return obj


def result_record(result: PipelineResult, wall_seconds: float) -> Dict[str, Any]:
    value = complex(result.value)
    return {
        "value_re": value.real,
        "value_im": value.imag,
        "abs_error_estimate": float(result.abs_error_estimate),
        "wall_seconds": float(wall_seconds),
        "jet_evals": int(result.jet_evals),
        "groups": int(result.groups),
        "params": make_json_safe(result.params),
    }


def write_json(record: Dict[str, Any], path: PathLike) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(make_json_safe(record), f, indent=2, sort_keys=True)
        f.write("\n")


def write_csv(rows: Iterable[BenchRow], path: PathLike) -> None:
    """
    Bench CSV, one row per (T, mode).
    Columns: T, mode, wall_seconds, jet_evals, groups, value_re, value_im
    """
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow([
                repr(float(row.T)), row.mode, repr(float(row.wall_seconds)),
                row.jet_evals, row.groups,
                repr(complex(row.value).real), repr(complex(row.value).imag),
            ])


def fit_slope(heights: List[float], counts: List[float]) -> float:
    """
    Least-squares slope of log(count) against log(T).

    Raises:
        ValueError: With fewer than two usable points
    """
    pairs = [(math.log(t), math.log(c)) for t, c in zip(heights, counts) if t > 0 and c > 0]
    if len(pairs) < 2:
        raise ValueError("slope fit needs at least two positive (T, count) pairs")
    x, y = np.array(pairs).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
