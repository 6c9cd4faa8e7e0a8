"""Deterministic CSV / JSON emission for record lists.

Floats are written with six decimals (Python's correctly rounded
formatting, ties to even); ``None`` becomes an empty CSV field or JSON
``null``. Output depends only on the records, never on timing or threads.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Any, Sequence

from .criterion import ScanRecord

FLOAT_DECIMALS = 6


def _fields_of(record: Any) -> tuple[str, ...]:
    if dataclasses.is_dataclass(record):
        return tuple(f.name for f in dataclasses.fields(record))
    return tuple(record._fields)


def _as_dict(record: Any) -> dict[str, Any]:
    if dataclasses.is_dataclass(record):
        return {f.name: getattr(record, f.name) for f in dataclasses.fields(record)}
    return record._asdict()


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{FLOAT_DECIMALS}f}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{FLOAT_DECIMALS}f}")
    return value


def emit_csv(records: Sequence[Any], fields: Sequence[str] | None = None) -> str:
    """Header row plus one row per record, comma-separated, ``\\n`` line endings.

    ``fields`` defaults to the first record's field names, or to the
    :class:`ScanRecord` columns for an empty list.
    """
    if fields is None:
        fields = _fields_of(records[0]) if records else ScanRecord._fields
    lines = [",".join(fields)]
    for rec in records:
        row = _as_dict(rec)
        lines.append(",".join(_csv_cell(row[f]) for f in fields))
    return "\n".join(lines) + "\n"


def emit_json(records: Sequence[Any], fields: Sequence[str] | None = None) -> str:
    """JSON array of objects with keys in field order; ``[]`` for no records."""
    objs = []
    for rec in records:
        row = _as_dict(rec)
        keys = fields if fields is not None else _fields_of(rec)
        objs.append({k: _json_value(row[k]) for k in keys})
    if not objs:
        return "[]\n"
    return json.dumps(objs, indent=2) + "\n"


def emit(records: Sequence[Any], fmt: str, fields: Sequence[str] | None = None) -> str:
    if fmt == "csv":
        return emit_csv(records, fields)
    if fmt == "json":
        return emit_json(records, fields)
    raise ValueError(f"unknown output format {fmt!r}")
