"""Report rendering: canonical JSON, CSV, and aligned text tables.

The structured format must be byte-identical across runs with the same
inputs, so it is emitted by a small canonical serializer instead of
json.dumps: keys sorted, floats at 12 significant digits, no NaN or
infinities. A report parsed back with json.loads and re-emitted reproduces
the same bytes, which is the round-trip the test suite pins down.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ValidationError


def format_float(value: float) -> str:
    """12 significant digits; always a valid JSON number."""
    if math.isnan(value) or math.isinf(value):
        raise ValidationError("reports cannot carry NaN or infinite values")
    if value == 0.0:
        return "0"  # normalize the sign of zero
    return format(value, ".12g")


def _emit(obj, out: list[str]) -> None:
    if isinstance(obj, np.generic):  # normalize stray numpy scalars
        obj = obj.item()
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for pos, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ValidationError(f"report keys must be strings, got {key!r}")
            if pos:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for pos, item in enumerate(obj):
            if pos:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise ValidationError(f"cannot serialize {type(obj).__name__} into a report")


def dumps_canonical(report: dict) -> str:
    """Canonical structured rendering, newline-terminated."""
    out: list[str] = []
    _emit(report, out)
    return "".join(out) + "\n"


def _flatten(obj, prefix: str, rows: list[tuple[str, object]]) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(obj, (list, tuple)):
        for pos, item in enumerate(obj):
            _flatten(item, f"{prefix}[{pos}]", rows)
    else:
        rows.append((prefix, obj))


def _cell(value) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def dumps_csv(report: dict) -> str:
    """Flat label,value rows; lists are indexed, nesting is dotted."""
    rows: list[tuple[str, object]] = []
    _flatten(report, "", rows)
    lines = ["label,value"]
    for label, value in rows:
        text = _cell(value)
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        if "," in label or '"' in label:
            label = '"' + label.replace('"', '""') + '"'
        lines.append(f"{label},{text}")
    return "\n".join(lines) + "\n"


def dumps_table(report: dict) -> str:
    """Aligned two-column text for terminals."""
    rows: list[tuple[str, object]] = []
    _flatten(report, "", rows)
    width = max((len(label) for label, _ in rows), default=0)
    lines = [f"{label.ljust(width)}  {_cell(value)}" for label, value in rows]
    return "\n".join(lines) + "\n"


FORMATS = ("structured", "csv", "table")


def render(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return dumps_canonical(report)
    if fmt == "csv":
        return dumps_csv(report)
    if fmt == "table":
        return dumps_table(report)
    raise ValidationError(f"unknown format {fmt!r}: expected one of {FORMATS}")
