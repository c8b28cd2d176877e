"""Deterministic JSON reports.

Keys are sorted, floats are rounded to 12 significant digits before
serialization, numpy scalars and arrays are converted to plain Python
values. Identical inputs therefore serialize to identical bytes on any
platform.
"""

from __future__ import annotations

import json

import numpy as np

REPORT_SCHEMA = "anisoclusters-report"
REPORT_VERSION = 1


def _canon(value):
    if isinstance(value, dict):
        out = {}
        for key in value:
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            out[key] = _canon(value[key])
        return out
    if isinstance(value, (list, tuple)):
        return [_canon(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_canon(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(f"{v:.12g}")
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def make_report(task, result, seed=None, scenario_name=None):
    """Wrap a task result in the report envelope."""
    rep = {
        "schema": REPORT_SCHEMA,
        "version": REPORT_VERSION,
        "task": task,
        "result": result,
    }
    if seed is not None:
        rep["seed"] = int(seed)
    if scenario_name is not None:
        rep["scenario"] = str(scenario_name)
    return rep


def render_report(report):
    """Serialize a report to canonical JSON text."""
    return json.dumps(_canon(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(path, report):
    text = render_report(report)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
