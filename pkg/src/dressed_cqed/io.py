"""CSV/JSON serialization of traces.

Floats are written with ``repr`` (shortest round-trip form), so a file
re-parses to bit-identical arrays.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .sweep import Trace


def _fmt(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _meta_value(v):
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, (list, tuple)):
        return json.dumps(list(v))
    return str(v)


def _check(traces):
    if not traces:
        raise ValueError("no traces to write")
    axis = traces[0].axis_values
    for t in traces[1:]:
        if t.axis_values.shape != axis.shape or not np.array_equal(t.axis_values, axis):
            raise ValueError("traces must share one axis grid")


def format_csv(traces, metadata=None) -> str:
    """Render traces as CSV text: ``# key=value`` lines, a header, then rows."""
    _check(traces)
    meta = dict(metadata if metadata is not None else traces[0].metadata)
    lines = [f"# {k}={_meta_value(v)}" for k, v in meta.items()]
    lines.append(",".join([traces[0].axis_name] + [t.name for t in traces]))
    cols = [traces[0].axis_values] + [t.values for t in traces]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def format_json(traces, metadata=None) -> str:
    _check(traces)
    meta = dict(metadata if metadata is not None else traces[0].metadata)

    def enc(arr):
        return [None if math.isnan(v) else float(v) for v in arr]

    doc = {
        "metadata": {k: (v if isinstance(v, (int, float, str, bool, list)) else str(v)) for k, v in meta.items()},
        "axis": {"name": traces[0].axis_name, "values": enc(traces[0].axis_values)},
        "series": [{"name": t.name, "values": enc(t.values)} for t in traces],
    }
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def write_trace(traces, fmt, path, metadata=None):
    """Write traces sharing one axis grid to ``path`` as ``csv`` or ``json``.

    Nothing is written if validation fails.
    """
    traces = list(traces)
    if fmt == "csv":
        text = format_csv(traces, metadata)
    elif fmt == "json":
        text = format_json(traces, metadata)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_trace_csv(path):
    """Parse a CSV written by :func:`write_trace` back into traces.

    Metadata values come back as strings.
    """
    meta = {}
    header = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, val = line[2:].partition("=")
                meta[key] = val
            elif header is None:
                header = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return [
        Trace(data[:, 0], data[:, j], dict(meta), name=header[j], axis_name=header[0])
        for j in range(1, len(header))
    ]
