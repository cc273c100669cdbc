"""Street network model: a planar, undirected graph with walk/cycle edge attributes.

Coordinates are meters in a local planar CRS, so all distance math is
Euclidean. Networks are ingested from a JSON document (see ``load_network``)
and treated as immutable once built; any number of threads may query a loaded
graph concurrently.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple

from .errors import IntegrityError, InvalidDataError, ParseError

#: Relative tolerance between an edge's declared length and its polyline length.
GEOMETRY_LENGTH_RTOL = 0.005

EARTH_RADIUS_M = 6_371_000.0


class Coord(NamedTuple):
    """A point in the local planar CRS (meters east, meters north)."""

    x: float
    y: float


def polyline_length(points: Iterable[Coord]) -> float:
    """Cumulative Euclidean length of a polyline."""
    total = 0.0
    prev = None
    for p in points:
        if prev is not None:
            total += math.hypot(p[0] - prev[0], p[1] - prev[1])
        prev = p
    return total


@dataclass(frozen=True)
class StreetNode:
    id: str
    position: Coord


@dataclass(frozen=True)
class StreetEdge:
    """An undirected street segment with the attributes the feasibility rules need.

    ``geometry`` runs from the ``from_node`` position to the ``to_node``
    position; traversal in the opposite direction reverses it.
    """

    id: str
    from_node: str
    to_node: str
    length_m: float
    gradient_pct: float
    footpath: bool
    segregated_bike_lane: bool
    crossings: int
    geometry: tuple[Coord, ...]


@dataclass(frozen=True)
class StreetGraph:
    """Immutable street network.

    ``adjacency`` maps node id -> tuple of (edge id, neighbour node id),
    sorted by edge id so traversal order is deterministic.
    """

    crs: str
    nodes: dict[str, StreetNode]
    edges: dict[str, StreetEdge]
    bbox: tuple[Coord, Coord]
    adjacency: dict[str, tuple[tuple[str, str], ...]] = field(repr=False)

    @classmethod
    def build(cls, crs: str, nodes: dict[str, StreetNode], edges: dict[str, StreetEdge]) -> "StreetGraph":
        adjacency: dict[str, list[tuple[str, str]]] = {nid: [] for nid in nodes}
        for edge in edges.values():
            if edge.from_node != edge.to_node:
                adjacency[edge.from_node].append((edge.id, edge.to_node))
                adjacency[edge.to_node].append((edge.id, edge.from_node))
        frozen = {nid: tuple(sorted(nbrs)) for nid, nbrs in adjacency.items()}
        xs: list[float] = []
        ys: list[float] = []
        for node in nodes.values():
            xs.append(node.position.x)
            ys.append(node.position.y)
        for edge in edges.values():
            for p in edge.geometry:
                xs.append(p.x)
                ys.append(p.y)
        if xs:
            bbox = (Coord(min(xs), min(ys)), Coord(max(xs), max(ys)))
        else:
            bbox = (Coord(0.0, 0.0), Coord(0.0, 0.0))
        return cls(crs=crs, nodes=nodes, edges=edges, bbox=bbox, adjacency=frozen)


def _read_text(source: bytes | str | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _coord(value, where: str) -> Coord:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"{where}: expected an [x, y] pair, got {value!r}")
    x, y = float(value[0]), float(value[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidDataError(f"{where}: coordinates must be finite")
    return Coord(x, y)


def load_network(source: bytes | str | IO) -> StreetGraph:
    """Parse and validate a network JSON document into a StreetGraph.

    Raises ParseError (with byte offset) on malformed JSON, IntegrityError on
    dangling edge endpoints or duplicate ids, and InvalidDataError on value
    constraint violations (non-positive length, geometry/length mismatch, ...).
    """
    text = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"malformed network document at byte {offset}: {exc.msg}", offset=offset) from exc
    if not isinstance(doc, dict):
        raise ParseError("network document must be a JSON object")
    for key in ("crs", "nodes", "edges"):
        if key not in doc:
            raise ParseError(f"network document missing required key {key!r}")
    crs = doc["crs"]
    if not isinstance(crs, str):
        raise ParseError("'crs' must be a string label")

    nodes: dict[str, StreetNode] = {}
    for i, raw in enumerate(doc["nodes"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str):
            raise ParseError(f"nodes[{i}]: expected an object with a string 'id'")
        nid = raw["id"]
        if nid in nodes:
            raise IntegrityError(f"duplicate node id {nid!r}")
        pos = _coord([raw.get("x"), raw.get("y")], f"node {nid!r}")
        nodes[nid] = StreetNode(id=nid, position=pos)

    edges: dict[str, StreetEdge] = {}
    for i, raw in enumerate(doc["edges"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str):
            raise ParseError(f"edges[{i}]: expected an object with a string 'id'")
        eid = raw["id"]
        if eid in edges:
            raise IntegrityError(f"duplicate edge id {eid!r}")
        for endpoint_key in ("from", "to"):
            ref = raw.get(endpoint_key)
            if ref not in nodes:
                raise IntegrityError(f"edge {eid!r}: endpoint {ref!r} not present in nodes")
        length = raw.get("length_m")
        if not isinstance(length, (int, float)) or isinstance(length, bool) or not length > 0:
            raise InvalidDataError(f"edge {eid!r}: length_m must be > 0, got {length!r}")
        gradient = raw.get("gradient_pct", 0.0)
        if (
            not isinstance(gradient, (int, float))
            or isinstance(gradient, bool)
            or not math.isfinite(float(gradient))
            or gradient < 0
        ):
            raise InvalidDataError(f"edge {eid!r}: gradient_pct must be a finite number >= 0")
        crossings = raw.get("crossings", 0)
        if not isinstance(crossings, int) or isinstance(crossings, bool) or crossings < 0:
            raise InvalidDataError(f"edge {eid!r}: crossings must be a nonnegative integer")
        geometry_raw = raw.get("geometry")
        if not isinstance(geometry_raw, list) or len(geometry_raw) < 2:
            raise InvalidDataError(f"edge {eid!r}: geometry must hold at least 2 points")
        geometry = tuple(_coord(p, f"edge {eid!r} geometry[{j}]") for j, p in enumerate(geometry_raw))
        geom_length = polyline_length(geometry)
        if abs(geom_length - length) > GEOMETRY_LENGTH_RTOL * length:
            raise InvalidDataError(
                f"edge {eid!r}: geometry length {geom_length:.3f} m disagrees with "
                f"declared length {float(length):.3f} m beyond {GEOMETRY_LENGTH_RTOL:.1%}"
            )
        edges[eid] = StreetEdge(
            id=eid,
            from_node=raw["from"],
            to_node=raw["to"],
            length_m=float(length),
            gradient_pct=float(gradient),
            footpath=bool(raw.get("footpath", False)),
            segregated_bike_lane=bool(raw.get("segregated_bike_lane", False)),
            crossings=crossings,
            geometry=geometry,
        )

    return StreetGraph.build(crs, nodes, edges)


def serialize_network(graph: StreetGraph) -> str:
    """Canonical JSON form of a graph; ``load_network`` round-trips it."""
    doc = {
        "crs": graph.crs,
        "nodes": [
            {"id": n.id, "x": n.position.x, "y": n.position.y}
            for n in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            {
                "id": e.id,
                "from": e.from_node,
                "to": e.to_node,
                "length_m": e.length_m,
                "gradient_pct": e.gradient_pct,
                "footpath": e.footpath,
                "segregated_bike_lane": e.segregated_bike_lane,
                "crossings": e.crossings,
                "geometry": [[p.x, p.y] for p in e.geometry],
            }
            for e in sorted(graph.edges.values(), key=lambda e: e.id)
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def snap_point(graph: StreetGraph, p: Coord) -> tuple[str, float]:
    """Nearest graph node to ``p`` and its Euclidean distance.

    Ties are broken by the lexicographically smallest node id.
    """
    if not graph.nodes:
        raise InvalidDataError("cannot snap onto an empty graph")
    best_id = None
    best_d2 = math.inf
    for nid in sorted(graph.nodes):
        pos = graph.nodes[nid].position
        d2 = (pos.x - p[0]) ** 2 + (pos.y - p[1]) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_id = nid
    return best_id, math.sqrt(best_d2)


@dataclass(frozen=True)
class Violation:
    severity: str  # "error" or "warning"
    entity: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        """True when no error-level violation is present (warnings allowed)."""
        return not any(v.severity == "error" for v in self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


def validate_graph(graph: StreetGraph) -> ValidationReport:
    """Check every graph invariant; violations are data, not exceptions.

    Isolated nodes are reported at warning level (real extracts contain them).
    """
    violations: list[Violation] = []
    for eid in sorted(graph.edges):
        e = graph.edges[eid]
        for endpoint in (e.from_node, e.to_node):
            if endpoint not in graph.nodes:
                violations.append(Violation("error", eid, f"endpoint {endpoint!r} does not resolve"))
        if not e.length_m > 0:
            violations.append(Violation("error", eid, f"length_m {e.length_m!r} is not > 0"))
        if not math.isfinite(e.gradient_pct) or e.gradient_pct < 0:
            violations.append(Violation("error", eid, f"gradient_pct {e.gradient_pct!r} is not finite and >= 0"))
        if e.crossings < 0:
            violations.append(Violation("error", eid, f"crossings {e.crossings!r} is negative"))
        if len(e.geometry) < 2:
            violations.append(Violation("error", eid, "geometry has fewer than 2 points"))
            continue
        geom_length = polyline_length(e.geometry)
        if e.length_m > 0 and abs(geom_length - e.length_m) > GEOMETRY_LENGTH_RTOL * e.length_m:
            violations.append(
                Violation(
                    "error",
                    eid,
                    f"geometry/length mismatch: polyline is {geom_length:.3f} m, declared {e.length_m:.3f} m",
                )
            )
    (lo, hi) = graph.bbox
    for nid in sorted(graph.nodes):
        pos = graph.nodes[nid].position
        if not (math.isfinite(pos.x) and math.isfinite(pos.y)):
            violations.append(Violation("error", nid, "node position is not finite"))
        elif not (lo.x <= pos.x <= hi.x and lo.y <= pos.y <= hi.y):
            violations.append(Violation("error", nid, "node position lies outside the bounding box"))
        if not graph.adjacency.get(nid):
            violations.append(Violation("warning", nid, "isolated node (no incident edges)"))
    return ValidationReport(violations)


def convert_lonlat_network(doc: dict, *, ref: tuple[float, float] | None = None) -> dict:
    """Pre-conversion step for ingestion: project lon/lat coordinates to planar meters.

    Uses a local equirectangular projection about ``ref`` (lon, lat), which
    defaults to the mean of the node coordinates. Adequate at the few-km scale
    this platform works at; do not use for continent-sized extents.
    """
    nodes = doc.get("nodes", [])
    if not nodes:
        raise InvalidDataError("cannot project a network without nodes")
    if ref is None:
        lon0 = sum(n["x"] for n in nodes) / len(nodes)
        lat0 = sum(n["y"] for n in nodes) / len(nodes)
    else:
        lon0, lat0 = ref
    coslat = math.cos(math.radians(lat0))

    def project(lon: float, lat: float) -> tuple[float, float]:
        x = EARTH_RADIUS_M * math.radians(lon - lon0) * coslat
        y = EARTH_RADIUS_M * math.radians(lat - lat0)
        return x, y

    out = {
        "crs": f"local-equirectangular lon0={lon0:.6f} lat0={lat0:.6f}",
        "nodes": [],
        "edges": [],
    }
    for n in nodes:
        x, y = project(n["x"], n["y"])
        out["nodes"].append({"id": n["id"], "x": x, "y": y})
    for e in doc.get("edges", []):
        converted = dict(e)
        converted["geometry"] = [list(project(px, py)) for px, py in e.get("geometry", [])]
        out["edges"].append(converted)
    return out
