"""Stateful exploration sessions: submit queries, track history, build dashboards.

Sessions, history entries, and dashboards are kept in memory and mirrored to a
JSON-lines event log; replaying the log on startup restores the full service
state without re-executing any query.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .charts import ChartSpec, recommend_chart
from .embedding import Embedder, default_embedder
from .errors import (
    IndexOutOfRange,
    InvalidCell,
    OverlappingCells,
    StaleRecommendationIndex,
    UnknownDashboard,
    UnknownDatabase,
    UnknownSession,
)
from .execution import ResultTable, SqliteBackend, classify_fields, execute
from .ir import QueryIR, render_nl
from .parser import parse_sql
from .recommender import (
    ExplorationContext,
    RecommendationSet,
    RecommenderConfig,
    recommend_initial,
    recommend_next,
)
from .reference import ReferenceRepository
from .schema import SchemaCatalog, display_text_for


@dataclass(frozen=True)
class Segment:
    text: str
    kind: str  # plain | table_mention | column_mention


@dataclass(frozen=True)
class NLExplanation:
    segments: tuple[Segment, ...]

    def to_dict(self) -> dict:
        return {"segments": [[s.text, s.kind] for s in self.segments]}

    @classmethod
    def from_dict(cls, data: dict) -> "NLExplanation":
        return cls(segments=tuple(Segment(t, k) for t, k in data["segments"]))


def build_explanation(ir: QueryIR, catalog: SchemaCatalog) -> NLExplanation:
    """Template explanation with table/column mentions marked for highlighting."""
    segments: list[Segment] = [Segment("the system ", "plain")]
    for i, item in enumerate(ir.selections):
        if i > 0:
            segments.append(Segment(" and ", "plain"))
        segments.append(Segment("retrieves ", "plain"))
        segments.append(Segment(catalog.display_text(item.column), "column_mention"))
        segments.append(Segment(" from ", "plain"))
        segments.append(Segment(display_text_for(item.column.table), "table_mention"))
    for i, g in enumerate(ir.grouping):
        segments.append(Segment(", grouped by " if i == 0 else " and ", "plain"))
        segments.append(Segment(catalog.display_text(g), "column_mention"))
    return NLExplanation(segments=tuple(segments))


@dataclass(frozen=True)
class HistoryEntry:
    index: int
    query: QueryIR
    nl_text: str
    result: ResultTable
    chart: ChartSpec
    explanation: NLExplanation

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "query": self.query.to_dict(),
            "nl_text": self.nl_text,
            "result": self.result.to_dict(),
            "chart": self.chart.to_dict(),
            "explanation": self.explanation.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HistoryEntry":
        return cls(
            index=data["index"],
            query=QueryIR.from_dict(data["query"]),
            nl_text=data["nl_text"],
            result=ResultTable.from_dict(data["result"]),
            chart=ChartSpec.from_dict(data["chart"]),
            explanation=NLExplanation.from_dict(data["explanation"]),
        )


@dataclass(frozen=True)
class DashboardCell:
    history_index: int
    row: int
    col: int
    width: int
    height: int

    def to_dict(self) -> dict:
        return {
            "history_index": self.history_index,
            "row": self.row,
            "col": self.col,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DashboardCell":
        return cls(
            history_index=int(data["history_index"]),
            row=int(data["row"]),
            col=int(data["col"]),
            width=int(data["width"]),
            height=int(data["height"]),
        )

    def overlaps(self, other: "DashboardCell") -> bool:
        return not (
            self.row + self.height <= other.row
            or other.row + other.height <= self.row
            or self.col + self.width <= other.col
            or other.col + other.width <= self.col
        )


@dataclass(frozen=True)
class Dashboard:
    id: str
    session_id: str
    cells: tuple[DashboardCell, ...]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "session_id": self.session_id,
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Dashboard":
        return cls(
            id=data["id"],
            session_id=data["session_id"],
            cells=tuple(DashboardCell.from_dict(c) for c in data["cells"]),
        )


@dataclass
class Session:
    id: str
    database_id: str
    catalog: SchemaCatalog
    created_at: float
    history: list[HistoryEntry] = field(default_factory=list)
    last_served: RecommendationSet | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class EventLog:
    """Append-only JSON-lines persistence; replayed in order on startup."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        events = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events


@dataclass
class DatabaseBundle:
    """A registered database: its catalog plus the executable SQLite file."""

    database_id: str
    catalog: SchemaCatalog
    sqlite_path: str


class SessionService:
    """The exploration service behind the HTTP API.

    A query submission parses (or picks) a query, executes it, classifies and
    charts the result, appends the history entry, and recomputes the next
    recommendations from the full history, newest first.
    """

    def __init__(
        self,
        databases: dict[str, DatabaseBundle],
        repository: ReferenceRepository,
        recommender_config: RecommenderConfig | None = None,
        embedder: Embedder | None = None,
        storage_path=None,
    ):
        self.databases = dict(databases)
        self.repository = repository
        self.config = recommender_config or RecommenderConfig()
        self.embedder = embedder or default_embedder()
        self.sessions: dict[str, Session] = {}
        self.dashboards: dict[str, Dashboard] = {}
        self._backends: dict[str, SqliteBackend] = {}
        self._registry_lock = threading.Lock()
        self.log = EventLog(storage_path) if storage_path else None
        if self.log:
            self._replay()

    # -- internals ---------------------------------------------------------

    def _context(self, catalog: SchemaCatalog) -> ExplorationContext:
        return ExplorationContext(catalog=catalog, repository=self.repository, embedder=self.embedder)

    def _backend(self, session: Session) -> SqliteBackend:
        with self._registry_lock:
            backend = self._backends.get(session.id)
            if backend is None:
                backend = SqliteBackend(self.databases[session.database_id].sqlite_path)
                self._backends[session.id] = backend
            return backend

    def _get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def _replay(self) -> None:
        for event in self.log.replay():
            kind = event.get("event")
            if kind == "session_created":
                data = event["session"]
                bundle = self.databases.get(data["database_id"])
                if bundle is None:
                    continue
                self.sessions[data["id"]] = Session(
                    id=data["id"],
                    database_id=data["database_id"],
                    catalog=bundle.catalog,
                    created_at=data["created_at"],
                )
            elif kind == "query_submitted":
                session = self.sessions.get(event["session_id"])
                if session is not None:
                    session.history.append(HistoryEntry.from_dict(event["entry"]))
            elif kind == "dashboard_saved":
                dashboard = Dashboard.from_dict(event["dashboard"])
                self.dashboards[dashboard.id] = dashboard

    # -- API ----------------------------------------------------------------

    def list_databases(self) -> list[DatabaseBundle]:
        return [self.databases[k] for k in sorted(self.databases)]

    def create_session(self, database_id: str) -> tuple[Session, RecommendationSet]:
        bundle = self.databases.get(database_id)
        if bundle is None:
            raise UnknownDatabase(f"no database {database_id!r} is registered")
        session = Session(
            id=uuid.uuid4().hex,
            database_id=database_id,
            catalog=bundle.catalog,
            created_at=time.time(),
        )
        initial = recommend_initial(self._context(bundle.catalog), self.config)
        session.last_served = initial
        with self._registry_lock:
            self.sessions[session.id] = session
        if self.log:
            self.log.append(
                {
                    "event": "session_created",
                    "session": {
                        "id": session.id,
                        "database_id": database_id,
                        "created_at": session.created_at,
                    },
                }
            )
        return session, initial

    def recommendations(self, session_id: str) -> RecommendationSet:
        session = self._get_session(session_id)
        with session.lock:
            history = list(reversed(session.history))
            served = recommend_next(
                [e.query for e in history], self._context(session.catalog), self.config
            )
            session.last_served = served
            return served

    def submit_query(
        self,
        session_id: str,
        sql: str | None = None,
        recommendation_index: int | None = None,
    ) -> tuple[HistoryEntry, RecommendationSet]:
        session = self._get_session(session_id)
        with session.lock:
            if recommendation_index is not None:
                served = session.last_served
                if served is None or not 0 <= recommendation_index < len(served.items):
                    raise StaleRecommendationIndex(
                        f"index {recommendation_index} does not match the last-served recommendations"
                    )
                ir = served.items[recommendation_index].query
            elif sql is not None:
                ir = parse_sql(sql, session.catalog)
            else:
                raise ValueError("submit_query needs sql or recommendation_index")

            backend = self._backend(session)
            result = classify_fields(execute(ir, backend))
            entry = HistoryEntry(
                index=len(session.history),
                query=ir,
                nl_text=render_nl(ir),
                result=result,
                chart=recommend_chart(result),
                explanation=build_explanation(ir, session.catalog),
            )
            session.history.append(entry)
            if self.log:
                self.log.append(
                    {
                        "event": "query_submitted",
                        "session_id": session.id,
                        "entry": entry.to_dict(),
                    }
                )
            next_set = recommend_next(
                [e.query for e in reversed(session.history)],
                self._context(session.catalog),
                self.config,
            )
            session.last_served = next_set
            return entry, next_set

    def history(self, session_id: str) -> list[HistoryEntry]:
        return list(self._get_session(session_id).history)

    def restore(self, session_id: str, index: int) -> HistoryEntry:
        session = self._get_session(session_id)
        if not 0 <= index < len(session.history):
            raise IndexOutOfRange(f"history index {index} out of range")
        return session.history[index]

    def save_dashboard(self, session_id: str, cells: list[DashboardCell]) -> Dashboard:
        session = self._get_session(session_id)
        for cell in cells:
            if not 0 <= cell.history_index < len(session.history):
                raise InvalidCell(f"cell references history index {cell.history_index}")
            if cell.width <= 0 or cell.height <= 0 or cell.row < 0 or cell.col < 0:
                raise InvalidCell(f"cell at ({cell.row}, {cell.col}) has bad geometry")
        for i, a in enumerate(cells):
            for b in cells[i + 1 :]:
                if a.overlaps(b):
                    raise OverlappingCells(f"cells at ({a.row},{a.col}) and ({b.row},{b.col}) overlap")
        dashboard = Dashboard(id=uuid.uuid4().hex, session_id=session_id, cells=tuple(cells))
        with self._registry_lock:
            self.dashboards[dashboard.id] = dashboard
        if self.log:
            self.log.append({"event": "dashboard_saved", "dashboard": dashboard.to_dict()})
        return dashboard

    def load_dashboard(self, dashboard_id: str) -> Dashboard:
        dashboard = self.dashboards.get(dashboard_id)
        if dashboard is None:
            raise UnknownDashboard(f"no dashboard {dashboard_id!r}")
        return dashboard

    def close(self) -> None:
        with self._registry_lock:
            for backend in self._backends.values():
                backend.close()
            self._backends.clear()
