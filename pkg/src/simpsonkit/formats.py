"""Reading and writing tables as CSV or JSON.

CSV layout::

    alternative,Agent 1,Agent 2,Agent 3
    Treatment 1,0/1,3/4,3/5
    Treatment 2,1/5,1/1,3/4

JSON layout::

    {"groups": ["Agent 1", ...],
     "alternatives": [{"name": "Treatment 1",
                       "cells": [{"successes": 0, "trials": 1}, ...]}, ...]}
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from pathlib import Path
from typing import Optional

from .table_model import CohortCount, PreferenceTable, TableError

CELL_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


class TableParseError(TableError):
    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        self.line, self.column = line, column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def parse_cell(text: str, line=None, column=None) -> CohortCount:
    match = CELL_RE.match(text)
    if not match:
        raise TableParseError(f"malformed cell {text!r}, expected 'successes/trials'",
                              line, column)
    try:
        return CohortCount(int(match.group(1)), int(match.group(2)))
    except TableError as exc:
        raise TableParseError(str(exc), line, column) from None


def parse_csv(text: str) -> PreferenceTable:
    rows = [r for r in csv.reader(io.StringIO(text))]
    numbered = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if len(numbered) < 3:
        raise TableParseError("need a header row and at least two alternative rows")
    (_, header), body = numbered[0], numbered[1:]
    groups = [h.strip() for h in header[1:]]
    alternatives, cells = [], []
    for lineno, row in body:
        if len(row) != len(header):
            raise TableParseError(
                f"row has {len(row)} fields, header has {len(header)}", lineno)
        alternatives.append(row[0].strip())
        cells.append([parse_cell(text, lineno, col + 2)
                      for col, text in enumerate(row[1:])])
    return _build(alternatives, groups, cells)


def parse_json(text: str) -> PreferenceTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        groups = list(doc["groups"])
        alternatives, cells = [], []
        for i, alt in enumerate(doc["alternatives"]):
            alternatives.append(alt["name"])
            row = []
            for j, cell in enumerate(alt["cells"]):
                where = f"alternatives[{i}].cells[{j}]"
                s, t = cell["successes"], cell["trials"]
                if isinstance(s, bool) or isinstance(t, bool) \
                        or not isinstance(s, int) or not isinstance(t, int):
                    raise TableParseError(f"{where}: successes and trials must be integers")
                try:
                    row.append(CohortCount(s, t))
                except TableError as exc:
                    raise TableParseError(f"{where}: {exc}") from None
            cells.append(row)
    except (KeyError, TypeError) as exc:
        raise TableParseError(f"missing or malformed field: {exc}") from None
    return _build(alternatives, groups, cells)


def _build(alternatives, groups, cells) -> PreferenceTable:
    try:
        return PreferenceTable(alternatives, groups, cells)
    except TableError as exc:
        if isinstance(exc, TableParseError):
            raise
        raise TableParseError(str(exc)) from None


def to_csv(table: PreferenceTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["alternative", *table.groups])
    for label, row in zip(table.alternatives, table.cells):
        writer.writerow([label, *(str(c) for c in row)])
    return out.getvalue()


def to_json_doc(table: PreferenceTable) -> dict:
    return {
        "groups": list(table.groups),
        "alternatives": [
            {"name": label,
             "cells": [{"successes": c.successes, "trials": c.trials} for c in row]}
            for label, row in zip(table.alternatives, table.cells)
        ],
    }


def to_json(table: PreferenceTable) -> str:
    return json.dumps(to_json_doc(table), indent=2) + "\n"


def table_digest(table: PreferenceTable) -> str:
    canonical = json.dumps(to_json_doc(table), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def detect_format(path: str) -> str:
    return "json" if Path(path).suffix.lower() == ".json" else "csv"


def parse_table(text: str, fmt: str = "csv") -> PreferenceTable:
    if fmt == "csv":
        return parse_csv(text)
    if fmt == "json":
        return parse_json(text)
    raise ValueError(f"unknown table format {fmt!r}")


def read_table(path: str, fmt: Optional[str] = None) -> PreferenceTable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TableParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_table(text, fmt or detect_format(path))
