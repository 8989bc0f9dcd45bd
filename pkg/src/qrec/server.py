"""HTTP layer over the session service: JSON in, JSON out, typed error codes."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors
from .session import DashboardCell, HistoryEntry, SessionService

_ERROR_STATUS = {
    errors.UnknownDatabase: (404, "unknown_database"),
    errors.UnknownSession: (404, "unknown_session"),
    errors.UnknownDashboard: (404, "unknown_dashboard"),
    errors.IndexOutOfRange: (404, "index_out_of_range"),
    errors.SqlSyntaxError: (400, "parse_error"),
    errors.UnknownTable: (400, "unknown_table"),
    errors.UnknownColumn: (400, "unknown_column"),
    errors.AmbiguousColumn: (400, "ambiguous_column"),
    errors.InvalidCell: (400, "invalid_cell"),
    errors.OverlappingCells: (400, "overlapping_cells"),
    errors.StaleRecommendationIndex: (409, "stale_recommendation_index"),
    errors.SchemaDrift: (409, "schema_drift"),
    errors.BackendError: (500, "execution_error"),
}


class CreateSessionBody(BaseModel):
    database_id: str


class SubmitQueryBody(BaseModel):
    sql: str | None = None
    recommendation_index: int | None = None


class DashboardCellBody(BaseModel):
    history_index: int
    row: int
    col: int
    width: int
    height: int


class SaveDashboardBody(BaseModel):
    session_id: str
    cells: list[DashboardCellBody]


def _entry_payload(entry: HistoryEntry) -> dict:
    payload = entry.to_dict()
    payload["vega_lite"] = entry.chart.to_vega_lite()
    return payload


def create_app(service: SessionService) -> FastAPI:
    app = FastAPI(title="qrec", docs_url=None, redoc_url=None)

    @app.exception_handler(errors.QrecError)
    async def handle_qrec_error(_request: Request, exc: errors.QrecError):
        status, code = 500, "internal_error"
        for klass, (st, name) in _ERROR_STATUS.items():
            if isinstance(exc, klass):
                status, code = st, name
                break
        body = {"error_code": code, "message": str(exc)}
        if isinstance(exc, errors.SqlSyntaxError):
            body["position"] = exc.position
        return JSONResponse(status_code=status, content=body)

    @app.get("/databases")
    def list_databases():
        return [
            {
                "id": bundle.database_id,
                "domain_label": bundle.catalog.domain_label,
                "tables": [
                    {
                        "name": t.name,
                        "primary_key": t.primary_key,
                        "columns": [
                            {
                                "name": c.name,
                                "display_text": c.display_text,
                                "value_kind": c.value_kind,
                            }
                            for c in t.columns
                        ],
                    }
                    for t in bundle.catalog.tables
                ],
            }
            for bundle in service.list_databases()
        ]

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session, initial = service.create_session(body.database_id)
        return {
            "session_id": session.id,
            "database_id": session.database_id,
            "created_at": session.created_at,
            "recommendations": initial.to_dict(),
        }

    @app.post("/sessions/{session_id}/queries", status_code=201)
    def submit_query(session_id: str, body: SubmitQueryBody):
        entry, next_set = service.submit_query(
            session_id, sql=body.sql, recommendation_index=body.recommendation_index
        )
        return {"entry": _entry_payload(entry), "recommendations": next_set.to_dict()}

    @app.get("/sessions/{session_id}/recommendations")
    def recommendations(session_id: str):
        return service.recommendations(session_id).to_dict()

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        return {"entries": [_entry_payload(e) for e in service.history(session_id)]}

    @app.get("/sessions/{session_id}/history/{index}")
    def restore(session_id: str, index: int):
        return _entry_payload(service.restore(session_id, index))

    @app.post("/dashboards", status_code=201)
    def save_dashboard(body: SaveDashboardBody):
        cells = [
            DashboardCell(
                history_index=c.history_index,
                row=c.row,
                col=c.col,
                width=c.width,
                height=c.height,
            )
            for c in body.cells
        ]
        return service.save_dashboard(body.session_id, cells).to_dict()

    @app.get("/dashboards/{dashboard_id}")
    def load_dashboard(dashboard_id: str):
        return service.load_dashboard(dashboard_id).to_dict()

    return app
