"""Deterministic JSON and CSV rendering shared by the CLI and the service.

Floats are written with 17 significant digits so every 64-bit value
round-trips exactly; the CLI and the HTTP service both go through these
functions, which is what makes their outputs byte-identical for identical
inputs.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Any

__all__ = ["format_float", "to_jsonable", "to_json", "to_csv"]


def format_float(value: float) -> str:
    """17-significant-digit decimal form; exact float64 round-trip."""
    if math.isnan(value) or math.isinf(value):
        # JSON has no non-finite literals; CSV gets the same spelling.
        return "null" if math.isnan(value) else ("-inf" if value < 0 else "inf")
    text = format(value, ".17g")
    return text


def to_jsonable(obj: Any) -> Any:
    """Reduce dataclasses, numpy scalars/arrays, and tuples to plain data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return to_jsonable(obj.item())  # numpy scalars
    if hasattr(obj, "tolist") and not isinstance(obj, (str, bytes)):
        return to_jsonable(obj.tolist())  # numpy arrays
    return obj


def _emit(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        text = format_float(obj)
        # Non-finite values have no JSON encoding; degrade to null.
        out.append("null" if text in ("inf", "-inf") else text)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _emit(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{close_pad}}}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            out.append("[")
            for i, value in enumerate(obj):
                _emit(value, out, indent, level + 1)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad)
            _emit(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{close_pad}]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj: Any, *, indent: int = 2) -> str:
    """Render to JSON text with exact float round-trip and stable key order."""
    out: list[str] = []
    _emit(to_jsonable(obj), out, indent, 0)
    return "".join(out)


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _flatten(prefix: str, value: Any, row: dict[str, Any]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, row)
    else:
        row[prefix] = value


def to_csv(obj: Any) -> str:
    """Render a result payload as CSV.

    Tables ({"columns": [...], "rows": [[...]]}) keep their shape; a list of
    records becomes one row per record; a single mapping becomes a
    header/value pair of rows.  Nested mappings flatten to dotted columns.
    """
    data = to_jsonable(obj)
    if (isinstance(data, dict) and len(data) == 1
            and isinstance(next(iter(data.values())), list)):
        data = next(iter(data.values()))
    if isinstance(data, dict) and "columns" in data and "rows" in data:
        lines = [",".join(_csv_cell(c) for c in data["columns"])]
        lines += [",".join(_csv_cell(v) for v in row) for row in data["rows"]]
        return "\n".join(lines) + "\n"
    if isinstance(data, list):
        rows = []
        for item in data:
            row: dict[str, Any] = {}
            _flatten("", item, row)
            rows.append(row)
        columns: list[str] = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        lines = [",".join(_csv_cell(c) for c in columns)]
        lines += [",".join(_csv_cell(row.get(c)) for c in columns)
                  for row in rows]
        return "\n".join(lines) + "\n"
    if isinstance(data, dict):
        row = {}
        _flatten("", data, row)
        lines = [",".join(_csv_cell(c) for c in row)]
        lines.append(",".join(_csv_cell(v) for v in row.values()))
        return "\n".join(lines) + "\n"
    return _csv_cell(data) + "\n"
