"""Batch command-line surface: ingestion, analysis, and report emission.

Every command is a thin wrapper over the workflow operations with disciplined
exit codes: 0 on success, 2 on malformed/invalid input, 1 on unmet state or
internal errors. Errors go to stderr as one machine-readable JSON object.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import CleanRoutesError, IntegrityError, InvalidDataError, ParseError
from .exposure import DEFAULT_HOUR
from .routing import DEFAULT_K
from .store import FeedbackRecord, Participant, RouteRecord
from .webapi import STORE_ENV_VAR
from .workflow import Workspace

_INPUT_ERRORS = (ParseError, IntegrityError, InvalidDataError)


def _fail(exc: Exception) -> None:
    payload = {"error": type(exc).__name__, "detail": str(exc)}
    click.echo(json.dumps(payload), err=True)
    sys.exit(2 if isinstance(exc, _INPUT_ERRORS) else 1)


@click.group()
@click.option(
    "--store",
    envvar=STORE_ENV_VAR,
    default="cleanroutes.sqlite",
    show_default=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help=f"Store database file (or ${STORE_ENV_VAR}).",
)
@click.pass_context
def main(ctx: click.Context, store: Path):
    """Low-exposure school route platform: ingest data, analyze routes, emit reports."""
    ctx.obj = store


def _workspace(ctx: click.Context) -> Workspace:
    return Workspace(ctx.obj)


@main.command("ingest-network")
@click.option("--network", "network_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--from-lonlat", is_flag=True, help="Project lon/lat coordinates to planar meters first.")
@click.pass_context
def ingest_network(ctx: click.Context, network_path: Path, from_lonlat: bool):
    """Validate and store the street network JSON."""
    try:
        graph = _workspace(ctx).ingest_network(network_path.read_bytes(), from_lonlat=from_lonlat)
    except CleanRoutesError as exc:
        _fail(exc)
    click.echo(f"network: {len(graph.nodes)} nodes, {len(graph.edges)} edges")


@main.command("ingest-raster")
@click.option(
    "--raster",
    "rasters",
    required=True,
    multiple=True,
    metavar="HOUR=PATH",
    help="Hour-of-day and ASCII grid path; repeatable.",
)
@click.pass_context
def ingest_raster(ctx: click.Context, rasters: tuple[str, ...]):
    """Validate and store concentration rasters, one per hour of day."""
    ws = _workspace(ctx)
    try:
        for entry in rasters:
            hour_str, _, path_str = entry.partition("=")
            if not path_str:
                raise InvalidDataError(f"expected HOUR=PATH, got {entry!r}")
            try:
                hour = int(hour_str)
            except ValueError:
                raise InvalidDataError(f"invalid hour {hour_str!r} in {entry!r}") from None
            path = Path(path_str)
            if not path.exists():
                raise InvalidDataError(f"raster file not found: {path}")
            raster = ws.ingest_raster(path.read_bytes(), hour)
            click.echo(f"raster hour {hour}: {raster.ncols}x{raster.nrows} cells of {raster.cell_size:g} m")
    except CleanRoutesError as exc:
        _fail(exc)


@main.command("import-routes")
@click.argument("records_file", type=click.Path(exists=True, path_type=Path))
@click.pass_context
def import_routes(ctx: click.Context, records_file: Path):
    """Load participants and route records from a JSON document.

    The document holds optional "participants" and "routes" arrays using the
    same schemas as the HTTP API.
    """
    ws = _workspace(ctx)
    try:
        try:
            doc = json.loads(records_file.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed records file at byte {exc.pos}: {exc.msg}", offset=exc.pos) from exc
        n_participants = 0
        for raw in doc.get("participants", []):
            ws.register_participant(
                Participant(id=raw["id"], consent=bool(raw.get("consent", False)), answers=raw.get("answers", {}))
            )
            n_participants += 1
        n_routes = 0
        for raw in doc.get("routes", []):
            ws.submit_route(RouteRecord.from_dict(raw))
            n_routes += 1
        n_feedback = 0
        for raw in doc.get("feedback", []):
            ws.submit_feedback(FeedbackRecord.from_dict(raw))
            n_feedback += 1
    except CleanRoutesError as exc:
        _fail(exc)
    click.echo(f"imported {n_participants} participants, {n_routes} routes, {n_feedback} feedback records")


@main.command("analyze-all")
@click.option("--k", default=DEFAULT_K, show_default=True, type=click.IntRange(min=1))
@click.option("--hour", default=DEFAULT_HOUR, show_default=True, type=click.IntRange(0, 23))
@click.option("--project", default=None, help="Only analyze routes of this project.")
@click.pass_context
def analyze_all(ctx: click.Context, k: int, hour: int, project: str | None):
    """Compute alternatives + exposure + benefit for every stored route."""
    ws = _workspace(ctx)
    failures = []
    n = 0
    for record in ws.store.iter_routes(project):
        try:
            analysis = ws.compute_alternatives(record.key, k=k, hour=hour)
        except CleanRoutesError as exc:
            failures.append({"route": record.key, "error": type(exc).__name__, "detail": str(exc)})
            continue
        n += 1
        click.echo(
            f"{record.key}: {len(analysis['alternatives'])} feasible alternatives, "
            f"delta {analysis['benefit']['delta_ugm3']}"
        )
    if failures:
        for failure in failures:
            click.echo(json.dumps(failure), err=True)
        sys.exit(1)
    click.echo(f"analyzed {n} routes")


@main.command("report")
@click.option("--project", default=None, help="Project to report on (default: all routes).")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.pass_context
def report(ctx: click.Context, project: str | None, out_dir: Path, figures: bool):
    """Emit the cohort report (CSV + JSON, plus figures) into a directory."""
    from .reporting import build_report_data, write_report

    ws = _workspace(ctx)
    try:
        data = build_report_data(ws, project)
        written = write_report(data, out_dir, figures=figures)
    except CleanRoutesError as exc:
        _fail(exc)
    for path in written:
        click.echo(str(path))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.pass_context
def serve(ctx: click.Context, host: str, port: int):
    """Run the HTTP API server."""
    import uvicorn

    from .webapi import create_app

    uvicorn.run(create_app(ctx.obj), host=host, port=port)


if __name__ == "__main__":
    main()
