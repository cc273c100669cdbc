"""HTTP+JSON service exposing the study workflow.

Thin FastAPI layer over a Workspace: request bodies mirror the stored record
schemas, package/analysis payloads are returned exactly as persisted, and
domain errors map onto uniform status classes (404 unknown ids, 409 unmet
state preconditions, 422 invalid payloads).
"""
from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    CleanRoutesError,
    ConflictError,
    ConsistencyError,
    CoverageError,
    IntegrityError,
    InvalidDataError,
    NotFoundError,
    ParseError,
)
from .exposure import DEFAULT_HOUR
from .network import Coord
from .routing import DEFAULT_K, TravelMode
from .store import FeedbackRecord, Participant, RouteRecord
from .workflow import Workspace

STORE_ENV_VAR = "CLEANROUTES_STORE"

_STATUS: list[tuple[type, int]] = [
    (NotFoundError, 404),
    (ConflictError, 409),
    (ParseError, 422),
    (IntegrityError, 422),
    (InvalidDataError, 422),
    (CoverageError, 422),
    (ConsistencyError, 422),
]


class ParticipantIn(BaseModel):
    id: str
    consent: bool
    answers: dict[str, str] = Field(default_factory=dict)


class RouteIn(BaseModel):
    project_id: str
    route_id: str
    participant_id: str
    home: tuple[float, float]
    school: tuple[float, float]
    mode: str
    geometry: list[tuple[float, float]]
    timestamp: str = ""

    def to_record(self) -> RouteRecord:
        return RouteRecord(
            project_id=self.project_id,
            route_id=self.route_id,
            participant_id=self.participant_id,
            home=Coord(*self.home),
            school=Coord(*self.school),
            mode=self.mode,
            geometry=tuple(Coord(*p) for p in self.geometry),
            timestamp=self.timestamp,
        )


class FeedbackIn(BaseModel):
    participant_id: str
    q1_learned: bool
    q1_text: str = ""
    q2_will_change: bool
    q2_text: str = ""
    q3_can_act: bool
    q3_text: str = ""
    q4_rating: int
    timestamp: str = ""


class PreviewIn(BaseModel):
    waypoints: list[tuple[float, float]]
    mode: str = "walk"


def create_app(store_path: str | Path | None = None, *, workspace: Workspace | None = None) -> FastAPI:
    """App factory; store path falls back to the CLEANROUTES_STORE env var."""
    if workspace is None:
        if store_path is None:
            store_path = os.environ.get(STORE_ENV_VAR, "cleanroutes.sqlite")
        workspace = Workspace(store_path)
    ws = workspace

    app = FastAPI(title="cleanroutes", version="0.1.0")
    # the map client is served as static files from another origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(CleanRoutesError)
    async def _domain_error(request: Request, exc: CleanRoutesError):
        status = next((code for cls, code in _STATUS if isinstance(exc, cls)), 500)
        return JSONResponse(status_code=status, content={"error": type(exc).__name__, "detail": str(exc)})

    @app.post("/participants", status_code=201)
    def post_participant(body: ParticipantIn):
        pid = ws.register_participant(Participant(id=body.id, consent=body.consent, answers=body.answers))
        return {"id": pid}

    @app.post("/routes", status_code=201)
    def post_route(body: RouteIn):
        key = ws.submit_route(body.to_record())
        return {"id": key}

    @app.get("/routes/{route_key}")
    def get_route(route_key: str):
        return ws.store.get_route(route_key).to_dict()

    @app.post("/routes/preview")
    def post_preview(body: PreviewIn):
        try:
            mode = TravelMode(body.mode)
        except ValueError:
            raise InvalidDataError(f"mode must be walk or cycle, got {body.mode!r}") from None
        return ws.preview_geometry([Coord(*p) for p in body.waypoints], mode)

    @app.post("/routes/{route_key}/analysis")
    def post_analysis(route_key: str, k: int = Query(DEFAULT_K, ge=1), hour: int = Query(DEFAULT_HOUR, ge=0, le=23)):
        return ws.compute_alternatives(route_key, k=k, hour=hour)

    @app.get("/routes/{route_key}/analysis")
    def get_analysis(route_key: str):
        return ws.get_analysis(route_key)

    @app.post("/routes/{route_key}/package", status_code=201)
    def post_package(route_key: str):
        package_id, version = ws.issue_package(route_key)
        return {"package_id": package_id, "version": version}

    @app.get("/packages/{package_id}")
    def get_package(package_id: str, format: str = Query("structured")):
        body = ws.get_package(package_id, format)
        if format == "hypertext":
            return Response(content=body, media_type="text/html; charset=utf-8")
        return Response(content=body, media_type="application/json")

    @app.post("/feedback", status_code=201)
    def post_feedback(body: FeedbackIn):
        ws.submit_feedback(
            FeedbackRecord(
                participant_id=body.participant_id,
                q1_learned=body.q1_learned,
                q1_text=body.q1_text,
                q2_will_change=body.q2_will_change,
                q2_text=body.q2_text,
                q3_can_act=body.q3_can_act,
                q3_text=body.q3_text,
                q4_rating=body.q4_rating,
                timestamp=body.timestamp,
            )
        )
        return {"status": "stored"}

    @app.get("/projects/{project_id}/effectiveness")
    def get_effectiveness(project_id: str):
        return ws.effectiveness(project_id).to_dict()

    @app.get("/projects/{project_id}/report")
    def get_report(project_id: str):
        from .reporting import build_report_data

        return build_report_data(ws, project_id)

    @app.get("/network")
    def get_network():
        body = ws.store.get_asset("network", "default")
        if body is None:
            raise NotFoundError("no network ingested")
        return Response(content=body, media_type="application/json")

    return app


def app() -> FastAPI:
    """Module-level factory for ``uvicorn cleanroutes.webapi:app --factory``."""
    return create_app()
