"""Tabular dataset loading with type inference, for CSV and JSON sources.

Columns are Number, Text, or TimeIndex. CSV columns whose values all parse as
numbers become Number, otherwise Text; JSON columns must be homogeneous. A
configured time field is typed TimeIndex and must be sortable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ColumnTypeError, EmptyDataset, ParseError

Value = float | str


class ColumnType(str, Enum):
    NUMBER = "number"
    TEXT = "text"
    TIME = "time"


@dataclass(frozen=True)
class Column:
    name: str
    ctype: ColumnType


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...]
    rows: tuple[tuple[Value, ...], ...]

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise KeyError(name)

    def column(self, name: str) -> Column | None:
        for col in self.columns:
            if col.name == name:
                return col
        return None

    def values(self, name: str) -> list[Value]:
        i = self.column_index(name)
        return [row[i] for row in self.rows]


def _columns_for(names: list[str], numeric: list[bool], time_field: str | None) -> tuple[Column, ...]:
    cols = []
    for name, is_num in zip(names, numeric):
        if name == time_field:
            ctype = ColumnType.TIME
        else:
            ctype = ColumnType.NUMBER if is_num else ColumnType.TEXT
        cols.append(Column(name, ctype))
    return tuple(cols)


def _as_number(raw: str) -> float | None:
    try:
        return float(raw)
    except ValueError:
        return None


def _load_csv(text: str, time_field: str | None) -> Dataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDataset("no header row") from None
    names = [h.strip() for h in header]
    raw_rows: list[list[str]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(names):
            raise ParseError(
                f"row {lineno} has {len(row)} fields, header has {len(names)}", row=lineno
            )
        raw_rows.append([cell.strip() for cell in row])
    if not raw_rows:
        raise EmptyDataset("no data rows")
    numeric = [all(_as_number(r[j]) is not None for r in raw_rows) for j in range(len(names))]
    rows = tuple(
        tuple(float(cell) if numeric[j] else cell for j, cell in enumerate(row))
        for row in raw_rows
    )
    return Dataset(columns=_columns_for(names, numeric, time_field), rows=rows)


def _load_json(text: str, time_field: str | None) -> Dataset:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", row=exc.lineno) from None
    if not isinstance(obj, list):
        raise ParseError("JSON dataset must be an array of objects", row=1)
    if not obj:
        raise EmptyDataset("empty JSON array")
    first = obj[0]
    if not isinstance(first, dict):
        raise ParseError("JSON dataset rows must be objects", row=1)
    names = list(first.keys())
    key_set = set(names)
    raw_rows: list[list] = []
    is_num = [True] * len(names)
    is_text = [True] * len(names)
    for rownum, rec in enumerate(obj, start=1):
        if not isinstance(rec, dict) or set(rec.keys()) != key_set:
            raise ParseError(f"row {rownum} does not match the first row's keys", row=rownum)
        row = []
        for j, name in enumerate(names):
            v = rec[name]
            if isinstance(v, bool) or v is None or isinstance(v, (list, dict)):
                raise ColumnTypeError(
                    f"column {name!r} has unsupported value {v!r} in row {rownum}", column=name
                )
            if isinstance(v, (int, float)):
                is_text[j] = False
            else:
                is_num[j] = False
            row.append(v)
        raw_rows.append(row)
    for j, name in enumerate(names):
        if not is_num[j] and not is_text[j]:
            raise ColumnTypeError(f"column {name!r} mixes numbers and text", column=name)
    rows = tuple(
        tuple(float(cell) if is_num[j] else cell for j, cell in enumerate(row))
        for row in raw_rows
    )
    return Dataset(columns=_columns_for(names, is_num, time_field), rows=rows)


def load_dataset(source: bytes | str, fmt: str, time_field: str | None = None) -> Dataset:
    """Parse a CSV (header required) or JSON (array of flat objects) dataset."""
    text = source.decode("utf-8") if isinstance(source, bytes) else source
    if not text.strip():
        raise EmptyDataset("empty input")
    if fmt == "csv":
        return _load_csv(text, time_field)
    if fmt == "json":
        return _load_json(text, time_field)
    raise ValueError(f"unknown dataset format {fmt!r}")


def load_dataset_path(path: str | Path, time_field: str | None = None) -> Dataset:
    p = Path(path)
    fmt = "json" if p.suffix.lower() == ".json" else "csv"
    return load_dataset(p.read_bytes(), fmt, time_field=time_field)
