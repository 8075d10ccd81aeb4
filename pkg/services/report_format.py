"""
Byte-stable JSON and CSV writers

Floats are printed with 17 significant digits, keys keep insertion order and
lines end in LF, so identical runs give identical files.
"""
import csv
import io
import json
import math
from enum import Enum
from typing import Any, Iterable, List, Sequence

import numpy as np
from pydantic import BaseModel

SIGNIFICANT_DIGITS = 17


def format_float(value: float) -> str:
    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def _to_json(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(value, BaseModel):
        value = value.model_dump(by_alias=True, mode="python")
    if isinstance(value, Enum):
        value = value.value
    if value is None or isinstance(value, (bool, np.bool_)):
        return "null" if value is None else ("true" if value else "false")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # JSON has no inf or nan
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(key))}: {_to_json(item, indent, level + 1)}" for key, item in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}{_to_json(item, indent, level + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_json(value: Any, indent: int = 2) -> str:
    """JSON text with a trailing newline"""
    return _to_json(value, indent, 0) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(cell) for cell in row])
    return buffer.getvalue()


SWEEP_HEADER: List[str] = [
    "L",
    "alpha",
    "area_hat",
    "lambda0_hat",
    "lambda1_hat",
    "lambda1_normalized",
    "rhs_eq1",
    "rhs_eq3",
    "hersch_ratio",
]

SPECTRUM_HEADER: List[str] = ["index", "value", "k", "multiplicity", "branch", "sector_index", "parity"]


def sweep_csv(points) -> str:
    return dumps_csv(SWEEP_HEADER, ([getattr(point, column) for column in SWEEP_HEADER] for point in points))


def spectrum_csv(result) -> str:
    rows = [
        [index, value, entry.k, entry.multiplicity, branch, entry.sector_index, entry.parity]
        for index, (value, entry, branch) in enumerate(result.expanded())
    ]
    return dumps_csv(SPECTRUM_HEADER, rows)


def spectrum_document(result, normalized: bool) -> dict:
    return {
        "metric": result.metric,
        "alpha": result.alpha,
        "normalized": normalized,
        "num_values": result.num_values,
        "lambda0": result.lambda0,
        "lambda1": result.lambda1,
        "values": [
            {
                "value": value,
                "k": entry.k,
                "multiplicity": entry.multiplicity,
                "branch": branch,
                "sector_index": entry.sector_index,
                "parity": entry.parity,
            }
            for value, entry, branch in result.expanded()
        ],
        "flags": result.flags,
        "numerics": result.numerics,
    }
