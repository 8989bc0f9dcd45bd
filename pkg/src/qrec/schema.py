"""Database schema catalog: tables, columns, FK links, and the join graph.

Catalogs are loaded either from Spider-format ``tables.json`` files or from
SQLite database files, validated on construction, and immutable afterwards.
"""

from __future__ import annotations

import json
import sqlite3
from collections import deque
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path

from .errors import DanglingForeignKey, EmptyCatalog, MalformedFile, NoJoinPath

VALUE_KINDS = ("numeric", "text", "datetime", "boolean")

FkEdge = tuple["ColumnRef", "ColumnRef"]


def display_text_for(identifier: str) -> str:
    """Default human-readable text for a column identifier."""
    return identifier.replace("_", " ").lower().strip()


@dataclass(frozen=True, order=True)
class ColumnRef:
    table: str
    column: str

    def __str__(self) -> str:
        return f"{self.table}.{self.column}"


@dataclass(frozen=True)
class ColumnDef:
    name: str
    display_text: str
    value_kind: str

    def __post_init__(self):
        if not self.display_text:
            raise MalformedFile(f"column {self.name!r} has empty display text")
        if self.value_kind not in VALUE_KINDS:
            raise MalformedFile(f"column {self.name!r} has bad value kind {self.value_kind!r}")


@dataclass(frozen=True)
class TableDef:
    name: str
    columns: tuple[ColumnDef, ...]
    primary_key: str | None = None

    def __post_init__(self):
        if not self.columns:
            raise MalformedFile(f"table {self.name!r} has no columns")
        lowered = [c.name.lower() for c in self.columns]
        if len(set(lowered)) != len(lowered):
            raise MalformedFile(f"table {self.name!r} has duplicate column names")

    def column(self, name: str) -> ColumnDef | None:
        lowered = name.lower()
        for col in self.columns:
            if col.name.lower() == lowered:
                return col
        return None


@dataclass(frozen=True)
class SchemaCatalog:
    """Immutable schema of one target database plus its analysis-domain label."""

    domain_label: str
    tables: tuple[TableDef, ...]
    fk_edges: tuple[FkEdge, ...] = ()
    _by_name: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.tables:
            raise EmptyCatalog("catalog has no tables")
        by_name: dict[str, TableDef] = {}
        for t in self.tables:
            key = t.name.lower()
            if key in by_name:
                raise MalformedFile(f"duplicate table name {t.name!r}")
            by_name[key] = t
        object.__setattr__(self, "_by_name", by_name)
        for a, b in self.fk_edges:
            for ref in (a, b):
                if self.find_column(ref) is None:
                    raise DanglingForeignKey(f"foreign key references missing column {ref}")

    # -- lookups --------------------------------------------------------

    def table(self, name: str) -> TableDef:
        t = self._by_name.get(name.lower())
        if t is None:
            raise KeyError(name)
        return t

    def has_table(self, name: str) -> bool:
        return name.lower() in self._by_name

    def find_column(self, ref: ColumnRef) -> ColumnDef | None:
        t = self._by_name.get(ref.table.lower())
        if t is None:
            return None
        return t.column(ref.column)

    def display_text(self, ref: ColumnRef) -> str:
        col = self.find_column(ref)
        if col is None:
            raise KeyError(str(ref))
        return col.display_text

    def value_kind(self, ref: ColumnRef) -> str:
        col = self.find_column(ref)
        if col is None:
            raise KeyError(str(ref))
        return col.value_kind

    def all_columns(self) -> list[ColumnRef]:
        return [ColumnRef(t.name, c.name) for t in self.tables for c in t.columns]

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "domain_label": self.domain_label,
            "tables": [
                {
                    "name": t.name,
                    "primary_key": t.primary_key,
                    "columns": [
                        {"name": c.name, "display_text": c.display_text, "value_kind": c.value_kind}
                        for c in t.columns
                    ],
                }
                for t in self.tables
            ],
            "fk_edges": [
                [[a.table, a.column], [b.table, b.column]] for a, b in self.fk_edges
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SchemaCatalog":
        try:
            tables = tuple(
                TableDef(
                    name=t["name"],
                    primary_key=t.get("primary_key"),
                    columns=tuple(
                        ColumnDef(c["name"], c["display_text"], c["value_kind"])
                        for c in t["columns"]
                    ),
                )
                for t in data["tables"]
            )
            edges = tuple(
                (ColumnRef(a[0], a[1]), ColumnRef(b[0], b[1]))
                for a, b in data["fk_edges"]
            )
            return cls(domain_label=data["domain_label"], tables=tables, fk_edges=edges)
        except (KeyError, TypeError, IndexError) as exc:
            raise MalformedFile(f"bad catalog payload: {exc}") from exc


# -- Spider tables.json -------------------------------------------------------

_SPIDER_KIND = {
    "number": "numeric",
    "text": "text",
    "time": "datetime",
    "boolean": "boolean",
    "others": "text",
}


def parse_spider_entry(entry: dict, domain_label: str | None = None) -> SchemaCatalog:
    """Build a catalog from one Spider database entry (already-parsed JSON)."""
    try:
        db_id = entry["db_id"]
        table_names = entry["table_names_original"]
        column_names = entry["column_names_original"]
        readable_names = entry.get("column_names", column_names)
        column_types = entry["column_types"]
        primary_keys = entry.get("primary_keys", [])
        foreign_keys = entry.get("foreign_keys", [])
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"bad Spider entry: missing {exc}") from exc

    if not table_names:
        raise EmptyCatalog(f"Spider entry {db_id!r} declares no tables")
    if len(column_names) != len(column_types) or len(readable_names) != len(column_names):
        raise MalformedFile(f"Spider entry {db_id!r}: column arrays disagree in length")

    per_table: dict[int, list[ColumnDef]] = {i: [] for i in range(len(table_names))}
    col_owner: list[tuple[int, str]] = []  # column index -> (table index, column name)
    for idx, (tbl_idx, name) in enumerate(column_names):
        col_owner.append((tbl_idx, name))
        if tbl_idx < 0:  # the "*" pseudo-column
            continue
        if tbl_idx >= len(table_names):
            raise MalformedFile(f"Spider entry {db_id!r}: column {name!r} has bad table index")
        readable = readable_names[idx][1] if readable_names[idx][1] else display_text_for(name)
        kind = _SPIDER_KIND.get(column_types[idx], "text")
        per_table[tbl_idx].append(ColumnDef(name=name, display_text=readable, value_kind=kind))

    pk_by_table: dict[int, str] = {}
    for pk in primary_keys:
        if isinstance(pk, list):  # composite key: keep the first member
            pk = pk[0] if pk else -1
        if not isinstance(pk, int) or not 0 <= pk < len(col_owner):
            raise MalformedFile(f"Spider entry {db_id!r}: bad primary key index {pk!r}")
        tbl_idx, name = col_owner[pk]
        pk_by_table.setdefault(tbl_idx, name)

    tables = tuple(
        TableDef(name=table_names[i], columns=tuple(per_table[i]), primary_key=pk_by_table.get(i))
        for i in range(len(table_names))
    )

    def col_ref(index: int) -> ColumnRef:
        if not isinstance(index, int) or not 0 <= index < len(col_owner):
            raise DanglingForeignKey(f"FK column index {index!r} out of range")
        tbl_idx, name = col_owner[index]
        if tbl_idx < 0:
            raise DanglingForeignKey(f"FK column index {index!r} points at the '*' column")
        return ColumnRef(table_names[tbl_idx], name)

    edges = tuple((col_ref(a), col_ref(b)) for a, b in foreign_keys)
    label = domain_label if domain_label is not None else db_id.replace("_", " ")
    return SchemaCatalog(domain_label=label, tables=tables, fk_edges=edges)


def load_spider_schema(path, db_id: str | None = None, domain_label: str | None = None) -> SchemaCatalog:
    """Load a catalog from a Spider ``tables.json`` file.

    The file must hold a single database entry unless ``db_id`` selects one.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path} is not valid JSON: {exc}") from exc

    if isinstance(payload, dict):
        entries = [payload]
    elif isinstance(payload, list):
        entries = payload
    else:
        raise MalformedFile(f"{path}: expected an object or a list of database entries")

    if db_id is not None:
        entries = [e for e in entries if isinstance(e, dict) and e.get("db_id") == db_id]
        if not entries:
            raise MalformedFile(f"{path}: no entry with db_id {db_id!r}")
    if len(entries) != 1:
        raise MalformedFile(f"{path}: holds {len(entries)} database entries; pass db_id to pick one")
    return parse_spider_entry(entries[0], domain_label=domain_label)


# -- SQLite files -------------------------------------------------------------

def _sqlite_value_kind(declared: str) -> str:
    t = (declared or "").upper()
    if "INT" in t:
        return "numeric"
    if any(tag in t for tag in ("REAL", "FLOA", "DOUB", "NUMER", "DECIM")):
        return "numeric"
    if "BOOL" in t:
        return "boolean"
    if "DATE" in t or "TIME" in t:
        return "datetime"
    return "text"


def _is_iso_datetime(value: str) -> bool:
    for parser in (date.fromisoformat, datetime.fromisoformat):
        try:
            parser(value)
            return True
        except (ValueError, TypeError):
            continue
    return False


def load_sqlite_schema(path, domain_label: str | None = None) -> SchemaCatalog:
    """Load a catalog from a SQLite database file.

    Text columns whose stored values all parse as ISO-8601 dates are promoted
    to the datetime kind so downstream chart rules can pick temporal marks.
    """
    p = Path(path)
    if not p.is_file():
        raise MalformedFile(f"{path} does not exist or is not a file")
    conn = sqlite3.connect(str(p))
    try:
        try:
            names = [
                row[0]
                for row in conn.execute(
                    "SELECT name FROM sqlite_master WHERE type='table' "
                    "AND name NOT LIKE 'sqlite_%' ORDER BY name"
                )
            ]
        except sqlite3.DatabaseError as exc:
            raise MalformedFile(f"{path} is not a SQLite database: {exc}") from exc
        if not names:
            raise EmptyCatalog(f"{path} contains no user tables")

        tables = []
        for name in names:
            cols = []
            primary_key = None
            for _cid, col_name, declared, _nn, _dflt, pk in conn.execute(
                f'PRAGMA table_info("{name}")'
            ):
                kind = _sqlite_value_kind(declared)
                if kind == "text":
                    sample = [
                        row[0]
                        for row in conn.execute(
                            f'SELECT DISTINCT "{col_name}" FROM "{name}" '
                            f'WHERE "{col_name}" IS NOT NULL LIMIT 50'
                        )
                    ]
                    if sample and all(isinstance(v, str) and _is_iso_datetime(v) for v in sample):
                        kind = "datetime"
                if pk == 1 and primary_key is None:
                    primary_key = col_name
                cols.append(ColumnDef(col_name, display_text_for(col_name), kind))
            tables.append(TableDef(name=name, columns=tuple(cols), primary_key=primary_key))

        table_map = {t.name: t for t in tables}
        edges = []
        for t in tables:
            for row in conn.execute(f'PRAGMA foreign_key_list("{t.name}")'):
                _id, _seq, target, from_col, to_col = row[0], row[1], row[2], row[3], row[4]
                target_def = table_map.get(target)
                if target_def is None:
                    raise DanglingForeignKey(f"{t.name}.{from_col} references missing table {target!r}")
                if to_col is None:
                    to_col = target_def.primary_key
                if to_col is None or target_def.column(to_col) is None:
                    raise DanglingForeignKey(f"{t.name}.{from_col} references missing column {target}.{to_col}")
                if t.column(from_col) is None:
                    raise DanglingForeignKey(f"unknown FK source column {t.name}.{from_col}")
                edges.append((ColumnRef(t.name, from_col), ColumnRef(target, to_col)))
    finally:
        conn.close()

    label = domain_label if domain_label is not None else display_text_for(p.stem)
    return SchemaCatalog(domain_label=label, tables=tuple(tables), fk_edges=tuple(edges))


# -- join graph ---------------------------------------------------------------

def _adjacency(catalog: SchemaCatalog) -> dict[str, list[tuple[str, FkEdge]]]:
    adj: dict[str, list[tuple[str, FkEdge]]] = {t.name: [] for t in catalog.tables}
    for edge in catalog.fk_edges:
        a, b = edge
        adj[catalog.table(a.table).name].append((catalog.table(b.table).name, edge))
        adj[catalog.table(b.table).name].append((catalog.table(a.table).name, edge))
    for entries in adj.values():
        entries.sort(key=lambda item: (item[0], item[1][0], item[1][1]))
    return adj


def join_path(catalog: SchemaCatalog, from_table: str, to_table: str) -> list[FkEdge]:
    """Shortest undirected FK path between two tables.

    Ties between equally short paths are broken by the lexicographic order of
    the (table, column) names along the path so synthesis stays deterministic.
    """
    src = catalog.table(from_table).name
    dst = catalog.table(to_table).name
    if src == dst:
        return []

    adj = _adjacency(catalog)

    def bfs(start: str) -> dict[str, int]:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for neigh, _edge in adj[node]:
                if neigh not in dist:
                    dist[neigh] = dist[node] + 1
                    queue.append(neigh)
        return dist

    dist_from = bfs(src)
    if dst not in dist_from:
        raise NoJoinPath(f"no FK path connects {from_table!r} and {to_table!r}")
    dist_to = bfs(dst)
    total = dist_from[dst]

    path: list[FkEdge] = []
    node = src
    for step in range(total):
        candidates = [
            (neigh, edge)
            for neigh, edge in adj[node]
            if dist_from.get(neigh) == step + 1 and dist_to.get(neigh) == total - step - 1
        ]
        neigh, edge = min(candidates, key=lambda item: (item[0], item[1][0], item[1][1]))
        path.append(edge)
        node = neigh
    return path
