"""Deterministic report emission.

Every command in the package funnels its output through this module, in one
of three formats:

* ``json``: the report object, keys sorted, two-space indent.
* ``csv``: the same data flattened to dotted keys.  A report carrying a
  ``rows`` list (a survey) becomes a proper table with one line per row,
  followed by a blank line and a key/value block for the remaining fields;
  anything else becomes a single key/value table.
* ``text``: an indented human-readable rendering.

Emission is reproducible byte for byte: no timestamps, no environment
echoes, no hash-order dependence.  Dictionaries are sorted, rows keep the
order the caller chose, and newlines are ``\\n`` on every platform.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import numpy as np

from .errors import ParameterError

FORMATS = ("json", "csv", "text")


def clean(obj):
    """Recursively convert a report into plain JSON-serializable types."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if obj is None or isinstance(obj, (int, float, str)):
        return obj
    return str(obj)


def flatten(obj, prefix: str = ""):
    """Yield (dotted key, scalar) pairs for a cleaned report object."""
    if isinstance(obj, dict):
        if not obj and prefix:
            yield prefix, ""
            return
        for k in sorted(obj):
            sub = f"{prefix}.{k}" if prefix else str(k)
            yield from flatten(obj[k], sub)
    elif isinstance(obj, list):
        if not obj and prefix:
            yield prefix, ""
            return
        for i, v in enumerate(obj):
            sub = f"{prefix}.{i}" if prefix else str(i)
            yield from flatten(v, sub)
    else:
        yield prefix, obj


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def to_json(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"


def to_csv(obj) -> str:
    data = clean(obj)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = data.get("rows") if isinstance(data, dict) else None
    if isinstance(rows, list) and all(isinstance(r, dict) for r in rows):
        flat_rows = [dict(flatten(r)) for r in rows]
        columns = sorted(set().union(*flat_rows)) if flat_rows else []
        writer.writerow(columns)
        for r in flat_rows:
            writer.writerow([_cell(r.get(c)) for c in columns])
        rest = {k: v for k, v in data.items() if k != "rows"}
        if rest:
            writer.writerow([])
            writer.writerow(["key", "value"])
            for k, v in flatten(rest):
                writer.writerow([k, _cell(v)])
    else:
        writer.writerow(["key", "value"])
        for k, v in flatten(data):
            writer.writerow([k, _cell(v)])
    return buf.getvalue()


def _text_lines(obj, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                _text_lines(v, indent + 1, out)
            else:
                out.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}-")
                _text_lines(v, indent + 1, out)
            else:
                out.append(f"{pad}- {_scalar_text(v)}")
    else:
        out.append(f"{pad}{_scalar_text(obj)}")


def _scalar_text(value) -> str:
    if value is None:
        return "~"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)


def to_text(obj) -> str:
    out: list = []
    _text_lines(clean(obj), 0, out)
    return "\n".join(out) + "\n"


def emit(obj, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(obj)
    if fmt == "csv":
        return to_csv(obj)
    if fmt == "text":
        return to_text(obj)
    raise ParameterError("format", f"unknown output format {fmt!r}, expected one of {FORMATS}")


def write_output(text: str, out_path: str | None = None) -> None:
    """Write to a file, or stdout when no path is given."""
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
