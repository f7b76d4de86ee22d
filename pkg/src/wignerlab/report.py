"""Versioned JSON reports and CSV streams.

Report layout (schema ``wignerlab.report/1``)::

    {
      "schema": "wignerlab.report/1",
      "kind": "<experiment kind>",
      "config": {...},          # echo of the ExperimentConfig
      "passed": true | false,
      "summary": {...},         # headline numbers and thresholds
      "results": [...],         # one entry per N
      "metadata": {...}         # timestamps, timings, versions
    }

Everything except ``metadata`` is a deterministic function of the
configuration, so two runs with the same seed produce identical bodies.
Floats are written in shortest round-trip form; non-finite values are
written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import csv
import json
import math
import platform
from datetime import datetime, timezone

import numpy as np

SCHEMA = "wignerlab.report/1"
REQUIRED = {"schema": str, "kind": str, "config": dict, "passed": bool, "summary": dict,
            "results": list, "metadata": dict}
METADATA_KEYS = ("started", "finished", "wall_seconds", "per_trial_seconds", "python", "numpy")


class SchemaError(ValueError):
    pass


def to_jsonable(obj):
    """Convert numpy scalars/arrays, tuples and non-finite floats to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    return obj


def metadata(started: datetime, finished: datetime, trial_seconds: list) -> dict:
    return {
        "started": started.isoformat(),
        "finished": finished.isoformat(),
        "wall_seconds": (finished - started).total_seconds(),
        "per_trial_seconds": float(np.mean(trial_seconds)) if trial_seconds else 0.0,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def now() -> datetime:
    return datetime.now(timezone.utc)


def build_report(kind: str, config: dict, passed: bool, summary: dict, results: list, meta: dict) -> dict:
    rep = {"schema": SCHEMA, "kind": kind, "config": config, "passed": bool(passed),
           "summary": summary, "results": results, "metadata": meta}
    rep = to_jsonable(rep)
    validate_report(rep)
    return rep


def validate_report(rep: dict) -> None:
    """Raise :class:`SchemaError` unless ``rep`` follows the report layout."""
    if not isinstance(rep, dict):
        raise SchemaError("report must be an object")
    for key, typ in REQUIRED.items():
        if key not in rep:
            raise SchemaError(f"missing key {key!r}")
        if not isinstance(rep[key], typ):
            raise SchemaError(f"key {key!r} must be {typ.__name__}")
    if rep["schema"] != SCHEMA:
        raise SchemaError(f"unsupported schema {rep['schema']!r}")
    extra = set(rep) - set(REQUIRED)
    if extra:
        raise SchemaError(f"unexpected keys {sorted(extra)}")
    for key in METADATA_KEYS:
        if key not in rep["metadata"]:
            raise SchemaError(f"metadata lacks {key!r}")
    for r in rep["results"]:
        if not isinstance(r, dict) or "N" not in r:
            raise SchemaError("every result entry must be an object with an 'N' field")
    json.dumps(rep, allow_nan=False)


def dumps(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True, allow_nan=False) + "\n"


def body(rep: dict) -> dict:
    """The report without its metadata block (the byte-comparable part)."""
    return {k: v for k, v in rep.items() if k != "metadata"}


def write_report(path, rep: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(rep))


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return str(v)


def write_csv(path, columns: list[str], rows) -> None:
    """Write rows with floats in shortest round-trip decimal form."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError("row length does not match the column header")
            w.writerow([_cell(v) for v in row])
