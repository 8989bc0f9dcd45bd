"""Query execution against SQLite backends and result-field classification."""

from __future__ import annotations

import sqlite3
import threading
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path

from .errors import BackendError, MalformedFile, SchemaDrift
from .ir import QueryIR, synthesize_sql, validate_ir

FIELD_TYPES = ("Q", "N", "T")


@dataclass(frozen=True)
class ResultTable:
    """Columns with Q/N/T field types (None before classification) plus rows."""

    columns: tuple[tuple[str, str | None], ...]
    rows: tuple[tuple, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row arity does not match column count")

    @property
    def field_types(self) -> tuple[str | None, ...]:
        return tuple(t for _, t in self.columns)

    def to_dict(self) -> dict:
        return {
            "columns": [[name, ftype] for name, ftype in self.columns],
            "rows": [list(row) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResultTable":
        return cls(
            columns=tuple((name, ftype) for name, ftype in data["columns"]),
            rows=tuple(tuple(row) for row in data["rows"]),
        )


class SqliteBackend:
    """Execution handle over one SQLite file.

    A handle is owned by a single session; the internal lock only guards the
    connection against the server's worker threads.
    """

    def __init__(self, path):
        p = Path(path)
        if not p.is_file():
            raise MalformedFile(f"{path} does not exist")
        self._conn = sqlite3.connect(str(p), check_same_thread=False)
        self._lock = threading.Lock()
        try:
            self._conn.execute("SELECT 1 FROM sqlite_master LIMIT 1")
        except sqlite3.DatabaseError as exc:
            raise MalformedFile(f"{path} is not a SQLite database: {exc}") from exc

    def close(self) -> None:
        self._conn.close()

    def live_columns(self) -> dict[str, set[str]]:
        with self._lock:
            tables = [
                row[0]
                for row in self._conn.execute(
                    "SELECT name FROM sqlite_master WHERE type='table'"
                )
            ]
            return {
                t.lower(): {
                    row[1].lower() for row in self._conn.execute(f'PRAGMA table_info("{t}")')
                }
                for t in tables
            }

    def run(self, sql: str) -> list[tuple]:
        with self._lock:
            try:
                return list(self._conn.execute(sql))
            except sqlite3.Error as exc:
                raise BackendError(f"execution failed: {exc}") from exc


def _result_columns(ir: QueryIR) -> list[tuple[str, str]]:
    """Output column names (deduplicated) and the SQL expressions behind them."""
    out: list[tuple[str, str]] = []
    used: set[str] = set()

    def unique(name: str) -> str:
        candidate = name
        suffix = 2
        while candidate in used:
            candidate = f"{name}_{suffix}"
            suffix += 1
        used.add(candidate)
        return candidate

    selected = set()
    for item in ir.selections:
        qualified = f"{item.column.table}.{item.column.column}"
        if item.aggregate is None:
            out.append((unique(item.column.column), qualified))
            selected.add(item.column)
        else:
            out.append((unique(f"{item.aggregate.value.lower()}_{item.column.column}"), f"{item.aggregate.value}({qualified})"))
    for g in ir.grouping:
        if g not in selected:
            out.append((unique(g.column), f"{g.table}.{g.column}"))
    return out


def execute(ir: QueryIR, backend: SqliteBackend) -> ResultTable:
    """Evaluate the IR's canonical SQL; columns follow the selections, then
    grouping columns not already selected.  Field types are left unclassified.
    """
    validate_ir(ir)
    live = backend.live_columns()
    for ref in [s.column for s in ir.selections] + list(ir.grouping):
        if ref.table.lower() not in live or ref.column.lower() not in live[ref.table.lower()]:
            raise SchemaDrift(f"column {ref} is gone from the backend")

    columns = _result_columns(ir)
    base = synthesize_sql(ir)
    select_clause = ", ".join(f'{expr} AS "{name}"' for name, expr in columns)
    sql = "SELECT " + select_clause + base[base.index(" FROM "):]
    rows = backend.run(sql)
    return ResultTable(
        columns=tuple((name, None) for name, _ in columns),
        rows=tuple(tuple(row) for row in rows),
    )


def _parses_as_date(value: str) -> bool:
    for parser in (date.fromisoformat, datetime.fromisoformat):
        try:
            parser(value)
            return True
        except (ValueError, TypeError):
            continue
    return False


def classify_fields(table: ResultTable) -> ResultTable:
    """Assign Q/N/T to every column from its non-null values.

    Numbers are quantitative; strings that all parse as ISO-8601 dates or
    timestamps are temporal; everything else (including all-null columns and
    booleans) is nominal.
    """
    types = []
    for index in range(len(table.columns)):
        values = [row[index] for row in table.rows if row[index] is not None]
        if values and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            types.append("Q")
        elif values and all(isinstance(v, str) and _parses_as_date(v) for v in values):
            types.append("T")
        else:
            types.append("N")
    return ResultTable(
        columns=tuple((name, ftype) for (name, _), ftype in zip(table.columns, types)),
        rows=table.rows,
    )
