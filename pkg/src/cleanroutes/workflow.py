"""Study workflow over a store: ingest assets, record routes, analyze, issue packages.

A Workspace owns a Store plus cached network/raster snapshots and runs the
four-stage loop: register participant and record route, compute feasible
lower-exposure alternatives, issue the information package, collect feedback,
then summarize effectiveness. Analyses are pure functions of (network,
raster, record, k, hour), serialized canonically, so repeat runs are
byte-identical.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from . import benefit as benefit_mod
from .benefit import BenefitReport, RiskModel, compare, load_risk_models
from .errors import ConflictError, CoverageError, InvalidDataError
from .exposure import (
    DEFAULT_HOUR,
    ConcentrationRaster,
    ExposureCategory,
    ExposureSummary,
    load_raster,
    rank_alternatives,
    route_exposure,
)
from .infopack import ContentCatalog, build_package, load_content_catalog, parse_package, render_package
from .network import Coord, StreetGraph, load_network, polyline_length, serialize_network, snap_point
from .routing import DEFAULT_K, TravelMode, build_route, generate_alternatives
from .store import FeedbackRecord, Participant, RouteRecord, Store, canonical_json

DEFAULT_SNAP_TOLERANCE_M = 250.0

_ID_PATTERN = re.compile(r"^[A-Za-z0-9_.-]+$")

RECORD_MODES = ("walk", "cycle", "car")


@dataclass(frozen=True)
class EffectivenessSummary:
    """Intervention outcome counts for one project.

    A participant "has a beneficial alternative" when their worst analyzed
    route's benefit delta exceeds the configured threshold; "switched" means
    they also answered the will-change question positively.
    """

    n_participants: int
    n_with_beneficial_alternative: int
    n_switched: int
    switch_rate: float | None  # percent; None when nobody had a beneficial alternative
    mean_rating: float | None

    def to_dict(self) -> dict:
        return {
            "n_participants": self.n_participants,
            "n_with_beneficial_alternative": self.n_with_beneficial_alternative,
            "n_switched": self.n_switched,
            "switch_rate": self.switch_rate,
            "mean_rating": self.mean_rating,
        }


def _summary_to_dict(summary: ExposureSummary) -> dict:
    return {
        "mean_ugm3": summary.mean_concentration,
        "category": summary.category.label,
        "sample_count": summary.sample_count,
        "missing_count": summary.missing_count,
    }


def _summary_from_dict(data: dict) -> ExposureSummary:
    return ExposureSummary(
        mean_concentration=data["mean_ugm3"],
        category=ExposureCategory.from_label(data["category"]),
        sample_count=data["sample_count"],
        missing_count=data["missing_count"],
    )


class Workspace:
    """All study operations over one store."""

    def __init__(
        self,
        store: Store | str | Path,
        *,
        risk_models: Sequence[RiskModel] | None = None,
        catalog: ContentCatalog | None = None,
        snap_tolerance_m: float = DEFAULT_SNAP_TOLERANCE_M,
        benefit_threshold_ugm3: float = 0.0,
    ):
        self.store = store if isinstance(store, Store) else Store(store)
        self.risk_models = list(risk_models) if risk_models is not None else load_risk_models()
        self.catalog = catalog if catalog is not None else load_content_catalog()
        self.snap_tolerance_m = snap_tolerance_m
        self.benefit_threshold_ugm3 = benefit_threshold_ugm3
        self._graph: StreetGraph | None = None
        self._rasters: dict[int, ConcentrationRaster] = {}

    # -- assets ------------------------------------------------------------

    def ingest_network(self, source: bytes | str | IO, *, from_lonlat: bool = False) -> StreetGraph:
        """Validate and persist the street network (canonical serialized form)."""
        if from_lonlat:
            import json as _json

            from .network import convert_lonlat_network

            if not isinstance(source, (bytes, str)):
                source = source.read()
            if isinstance(source, bytes):
                source = source.decode("utf-8")
            source = _json.dumps(convert_lonlat_network(_json.loads(source)))
        graph = load_network(source)
        self.store.put_asset("network", "default", serialize_network(graph).encode("utf-8"))
        self._graph = graph
        return graph

    def network(self) -> StreetGraph:
        if self._graph is None:
            body = self.store.get_asset("network", "default")
            if body is None:
                raise ConflictError("no network ingested")
            self._graph = load_network(body)
        return self._graph

    def ingest_raster(self, source: bytes | str | IO, hour: int) -> ConcentrationRaster:
        """Validate and persist the concentration field for one hour of day."""
        if not isinstance(source, (bytes, str)):
            source = source.read()
        if isinstance(source, str):
            source = source.encode("utf-8")
        raster = load_raster(source, hour)
        self.store.put_asset("raster", str(hour), source)
        self._rasters[hour] = raster
        return raster

    def raster(self, hour: int) -> ConcentrationRaster:
        if hour not in self._rasters:
            body = self.store.get_asset("raster", str(hour))
            if body is None:
                raise ConflictError(f"no raster ingested for hour {hour}")
            self._rasters[hour] = load_raster(body, hour)
        return self._rasters[hour]

    # -- participants and routes --------------------------------------------

    def register_participant(self, participant: Participant) -> str:
        if not participant.id or not _ID_PATTERN.match(participant.id):
            raise InvalidDataError(f"invalid participant id {participant.id!r}")
        self.store.put_participant(participant)
        return participant.id

    def submit_route(self, record: RouteRecord) -> str:
        """Validate and persist a route record; resubmission of the same
        (project, route) id replaces the stored record."""
        for label, value in (("project_id", record.project_id), ("route_id", record.route_id)):
            if not value or not _ID_PATTERN.match(value):
                raise InvalidDataError(f"invalid {label} {value!r}")
        participant = self.store.get_participant(record.participant_id)  # NotFoundError if absent
        if not participant.consent:
            raise InvalidDataError(f"participant {record.participant_id!r} has not consented")
        if record.mode not in RECORD_MODES:
            raise InvalidDataError(f"mode must be one of {RECORD_MODES}, got {record.mode!r}")
        if len(record.geometry) < 2:
            raise InvalidDataError("route geometry must hold at least 2 points")
        for label, endpoint, anchor in (
            ("start", record.geometry[0], record.home),
            ("end", record.geometry[-1], record.school),
        ):
            d = math.hypot(endpoint.x - anchor.x, endpoint.y - anchor.y)
            if d > self.snap_tolerance_m:
                raise InvalidDataError(
                    f"geometry {label} point is {d:.0f} m from the declared location "
                    f"(tolerance {self.snap_tolerance_m:.0f} m)"
                )
        return self.store.put_route(record)

    def preview_geometry(self, waypoints: Sequence[Coord], mode: TravelMode = TravelMode.WALK) -> dict:
        """Snap waypoints to the network and chain shortest paths between them.

        Serves the client-side drawing loop: the returned geometry is what a
        submitted record would follow along the street network.
        """
        from .routing import k_shortest_paths

        if len(waypoints) < 2:
            raise InvalidDataError("preview needs at least 2 waypoints")
        graph = self.network()
        node_ids: list[str] = []
        for p in waypoints:
            nid, _ = snap_point(graph, Coord(float(p[0]), float(p[1])))
            if not node_ids or node_ids[-1] != nid:
                node_ids.append(nid)
        if len(node_ids) < 2:
            raise InvalidDataError("waypoints snap to a single node")
        geometry: list[Coord] = []
        total = 0.0
        for a, b in zip(node_ids, node_ids[1:]):
            legs = k_shortest_paths(graph, a, b, 1, mode)
            if not legs:
                raise InvalidDataError(f"no path between snapped nodes {a!r} and {b!r}")
            leg = legs[0]
            total += leg.length_m
            for p in leg.geometry:
                if not geometry or geometry[-1] != p:
                    geometry.append(p)
        return {
            "geometry": [[p.x, p.y] for p in geometry],
            "length_m": total,
            "node_ids": node_ids,
        }

    # -- analysis --------------------------------------------------------------

    def compute_alternatives(self, route_key: str, k: int = DEFAULT_K, hour: int = DEFAULT_HOUR) -> dict:
        """Run the full pipeline for one stored route and persist the analysis.

        snap -> k-shortest paths -> feasibility screen -> exposure -> rank ->
        benefit. Car-mode records get both walking and cycling candidates;
        active-mode records keep their own mode.
        """
        record = self.store.get_route(route_key)
        graph = self.network()
        raster = self.raster(hour)

        home_node, home_dist = snap_point(graph, record.home)
        school_node, school_dist = snap_point(graph, record.school)
        if home_node == school_node:
            raise InvalidDataError("home and school snap to the same network node")
        current_length = polyline_length(record.geometry)
        current_summary = route_exposure(raster, record.geometry)

        modes = [TravelMode(record.mode)] if record.mode in ("walk", "cycle") else [TravelMode.WALK, TravelMode.CYCLE]
        candidates = []
        skipped_outside = 0
        for mode in modes:
            for route, metrics, report in generate_alternatives(
                graph, home_node, school_node, mode, k, current_length_m=current_length
            ):
                try:
                    summary = route_exposure(raster, route.geometry)
                except CoverageError:
                    skipped_outside += 1
                    continue
                candidates.append((route, metrics, report, summary))

        ranked = rank_alternatives([(route, summary) for route, _, _, summary in candidates])
        by_edges = {(route.mode, route.edge_ids): (metrics, report) for route, metrics, report, _ in candidates}
        benefit = compare(current_summary, [summary for _, summary in ranked], self.risk_models)

        alternatives = []
        for route, summary in ranked:
            metrics, report = by_edges[(route.mode, route.edge_ids)]
            alternatives.append(
                {
                    "route": {
                        "mode": route.mode.value,
                        "edge_ids": list(route.edge_ids),
                        "node_ids": list(route.node_ids),
                        "length_m": route.length_m,
                        "geometry": [[p.x, p.y] for p in route.geometry],
                    },
                    "metrics": {
                        "length_m": metrics.length_m,
                        "mean_gradient_pct": metrics.mean_gradient_pct,
                        "total_crossings": metrics.total_crossings,
                        "footpath_fraction": metrics.footpath_fraction,
                        "bike_lane_fraction": metrics.bike_lane_fraction,
                    },
                    "feasibility": {rule: verdict.value for rule, verdict in report.verdicts.items()},
                    "exposure": _summary_to_dict(summary),
                    "delta_ugm3": current_summary.mean_concentration - summary.mean_concentration,
                }
            )

        analysis = {
            "route_key": route_key,
            "participant_id": record.participant_id,
            "project_id": record.project_id,
            "k": k,
            "hour": hour,
            "snap": {
                "home_node": home_node,
                "home_distance_m": home_dist,
                "school_node": school_node,
                "school_distance_m": school_dist,
            },
            "current": {
                "mode": record.mode,
                "length_m": current_length,
                "exposure": _summary_to_dict(current_summary),
                "geometry": [[p.x, p.y] for p in record.geometry],
            },
            "alternatives": alternatives,
            "skipped_outside_coverage": skipped_outside,
            "benefit": {
                "delta_ugm3": benefit.delta,
                "category_shift": (
                    [benefit.category_shift[0].label, benefit.category_shift[1].label]
                    if benefit.category_shift
                    else None
                ),
                "risk_ratios": [[model_id, factor] for model_id, factor in benefit.risk_ratios],
            },
        }
        self.store.put_analysis(route_key, canonical_json(analysis))
        return analysis

    def get_analysis(self, route_key: str) -> dict:
        self.store.get_route(route_key)  # 404 before 409
        analysis = self.store.get_analysis(route_key)
        if analysis is None:
            raise ConflictError(f"route {route_key!r} has no analysis yet")
        return analysis

    def _report_from_analysis(self, analysis: dict) -> BenefitReport:
        current = _summary_from_dict(analysis["current"]["exposure"])
        alts = analysis["alternatives"]
        if not alts:
            return BenefitReport(current=current, best_alternative=None, delta=None,
                                 category_shift=None, risk_ratios=())
        best = _summary_from_dict(alts[0]["exposure"])
        return BenefitReport(
            current=current,
            best_alternative=best,
            delta=analysis["benefit"]["delta_ugm3"],
            category_shift=(current.category, best.category),
            risk_ratios=tuple((mid, factor) for mid, factor in analysis["benefit"]["risk_ratios"]),
        )

    # -- packages -------------------------------------------------------------

    def issue_package(self, route_key: str) -> tuple[str, int]:
        """Build the information package from the stored analysis and persist it.

        Issued packages are immutable snapshots; re-issuing creates version
        2, 3, ... rather than mutating.
        """
        analysis = self.get_analysis(route_key)
        record = self.store.get_route(route_key)
        graph = self.network()
        report = self._report_from_analysis(analysis)
        alternatives = []
        for alt in analysis["alternatives"]:
            route = build_route(
                graph, alt["route"]["node_ids"], alt["route"]["edge_ids"], TravelMode(alt["route"]["mode"])
            )
            alternatives.append((route, _summary_from_dict(alt["exposure"])))
        pkg = build_package(
            participant_id=record.participant_id,
            current_geometry=record.geometry,
            current_length_m=analysis["current"]["length_m"],
            alternatives=alternatives,
            report=report,
            catalog=self.catalog,
            models=self.risk_models,
        )
        body = render_package(pkg, "structured").decode("utf-8")
        return self.store.add_package(route_key, record.participant_id, body)

    def get_package(self, package_id: str, fmt: str = "structured") -> bytes:
        body = self.store.get_package_body(package_id)
        if fmt == "structured":
            return body.encode("utf-8")
        if fmt == "hypertext":
            return render_package(parse_package(body), "hypertext")
        raise InvalidDataError(f"unknown package format {fmt!r}")

    # -- feedback and effectiveness ------------------------------------------

    def submit_feedback(self, record: FeedbackRecord) -> None:
        self.store.get_participant(record.participant_id)  # NotFoundError if absent
        if not 1 <= record.q4_rating <= 5:
            raise InvalidDataError(f"rating must be in 1..5, got {record.q4_rating}")
        if not self.store.participant_has_package(record.participant_id):
            raise ConflictError(
                f"participant {record.participant_id!r} has no issued package yet"
            )
        self.store.put_feedback(record)

    def participant_reports(self, project_id: str | None = None) -> dict[str, BenefitReport]:
        """Worst-route benefit report per participant (highest current exposure).

        Participants whose routes have no analysis yet are omitted.
        """
        best: dict[str, tuple[float, str, BenefitReport]] = {}
        for record in self.store.iter_routes(project_id):
            analysis = self.store.get_analysis(record.key)
            if analysis is None:
                continue
            report = self._report_from_analysis(analysis)
            rank = (report.current.mean_concentration, record.key)
            existing = best.get(record.participant_id)
            if existing is None or rank > (existing[0], existing[1]):
                best[record.participant_id] = (rank[0], rank[1], report)
        return {pid: entry[2] for pid, entry in sorted(best.items())}

    def effectiveness(self, project_id: str | None = None) -> EffectivenessSummary:
        """Switch-rate summary for a project (zeros when the project is empty)."""
        participants = sorted({r.participant_id for r in self.store.iter_routes(project_id)})
        reports = self.participant_reports(project_id)
        beneficial = {
            pid
            for pid, report in reports.items()
            if report.delta is not None and report.delta > self.benefit_threshold_ugm3
        }
        switched = 0
        ratings: list[int] = []
        for pid in participants:
            fb = self.store.get_feedback(pid)
            if fb is None:
                continue
            ratings.append(fb.q4_rating)
            if pid in beneficial and fb.q2_will_change:
                switched += 1
        switch_rate = 100.0 * switched / len(beneficial) if beneficial else None
        mean_rating = sum(ratings) / len(ratings) if ratings else None
        return EffectivenessSummary(
            n_participants=len(participants),
            n_with_beneficial_alternative=len(beneficial),
            n_switched=switched,
            switch_rate=switch_rate,
            mean_rating=mean_rating,
        )

    def cohort(self, project_id: str | None = None):
        """(ShiftMatrix, CohortStats) over the project's analyzed participants,
        or (None, None) when nothing has been analyzed."""
        reports = list(self.participant_reports(project_id).values())
        if not reports:
            return None, None
        return benefit_mod.shift_matrix(reports), benefit_mod.cohort_stats(reports)
