"""Route generation: k-shortest loopless paths plus feasibility screening.

The path enumeration contract is total-order exact: paths come out sorted by
(length, edge-id sequence), so equal-length paths have a deterministic order
and repeated runs are bit-identical. Yen's algorithm provides the k-shortest
machinery; both its candidate heap and the spur-path searches compare the
composite key, which is what makes the tie-breaking exact rather than
incidental.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidDataError, NotFoundError
from .network import Coord, StreetGraph

DEFAULT_K = 10

#: Feasibility thresholds, meters (and counts / percent where noted).
MAX_CYCLE_LENGTH_M = 3000.0
CYCLE_CURRENT_CUTOFF_M = 2500.0
MAX_WALK_LENGTH_M = 1250.0
WALK_CURRENT_CUTOFF_M = 1000.0
SHORT_DETOUR_SLACK_M = 250.0
LONG_DETOUR_SLACK_M = 500.0
DETOUR_CUTOFF_M = 3000.0
MAX_CROSSINGS = 3
MAX_MEAN_GRADIENT_PCT = 10.0
MIN_BIKE_LANE_FRACTION = 0.5


class TravelMode(str, enum.Enum):
    WALK = "walk"
    CYCLE = "cycle"


@dataclass(frozen=True)
class Route:
    """A simple path through the street graph.

    ``length_m`` is the left-to-right sum of edge lengths, and ``geometry``
    the concatenation of the traversed edges' polylines (consecutive duplicate
    points collapsed).
    """

    mode: TravelMode
    edge_ids: tuple[str, ...]
    node_ids: tuple[str, ...]
    length_m: float
    geometry: tuple[Coord, ...]


@dataclass(frozen=True)
class RouteMetrics:
    length_m: float
    mean_gradient_pct: float
    total_crossings: int
    footpath_fraction: float
    bike_lane_fraction: float


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


RULE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8")


@dataclass(frozen=True)
class FeasibilityReport:
    verdicts: dict[str, Verdict]
    overall: bool


def _path_length(graph: StreetGraph, edge_ids: Sequence[str]) -> float:
    # Canonical left-to-right sum; every path length in this module is
    # computed this way so equal-length paths compare exactly equal.
    total = 0.0
    for eid in edge_ids:
        total += graph.edges[eid].length_m
    return total


def _oriented_geometry(graph: StreetGraph, edge_id: str, start_node: str) -> tuple[Coord, ...]:
    edge = graph.edges[edge_id]
    if edge.from_node == start_node:
        return edge.geometry
    return tuple(reversed(edge.geometry))


def build_route(graph: StreetGraph, node_ids: Sequence[str], edge_ids: Sequence[str], mode: TravelMode) -> Route:
    """Assemble a Route value from a node/edge walk through the graph."""
    if len(node_ids) != len(edge_ids) + 1:
        raise InvalidDataError("node sequence must be one longer than edge sequence")
    points: list[Coord] = []
    for start, eid in zip(node_ids, edge_ids):
        if eid not in graph.edges:
            raise NotFoundError(f"unknown edge {eid!r}")
        edge = graph.edges[eid]
        if start not in (edge.from_node, edge.to_node):
            raise InvalidDataError(f"edge {eid!r} is not incident to node {start!r}")
        for p in _oriented_geometry(graph, eid, start):
            if not points or points[-1] != p:
                points.append(p)
    return Route(
        mode=mode,
        edge_ids=tuple(edge_ids),
        node_ids=tuple(node_ids),
        length_m=_path_length(graph, edge_ids),
        geometry=tuple(points),
    )


def _min_key_path(
    graph: StreetGraph,
    source: str,
    target: str,
    banned_nodes: frozenset[str] | set[str],
    banned_edges: frozenset[str] | set[str],
) -> tuple[float, tuple[str, ...], tuple[str, ...]] | None:
    """Dijkstra minimizing (length, edge-id sequence) lexicographically.

    With positive edge lengths the composite key is strictly monotone along
    path extension and has optimal substructure, so the standard settled-set
    argument carries over unchanged.
    """
    heap: list[tuple[float, tuple[str, ...], str, tuple[str, ...]]] = [(0.0, (), source, (source,))]
    settled: set[str] = set()
    while heap:
        dist, edges, node, nodes = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == target:
            return dist, edges, nodes
        for eid, neighbour in graph.adjacency.get(node, ()):
            if eid in banned_edges or neighbour in settled or neighbour in banned_nodes:
                continue
            heapq.heappush(
                heap,
                (dist + graph.edges[eid].length_m, edges + (eid,), neighbour, nodes + (neighbour,)),
            )
    return None


def k_shortest_paths(graph: StreetGraph, origin: str, dest: str, k: int, mode: TravelMode) -> list[Route]:
    """The k shortest loopless routes from origin to dest, in (length, edge-id) order.

    Returns fewer than k routes when the graph does not contain that many
    simple paths, and an empty list when origin and dest are disconnected.
    """
    if origin not in graph.nodes:
        raise NotFoundError(f"unknown origin node {origin!r}")
    if dest not in graph.nodes:
        raise NotFoundError(f"unknown destination node {dest!r}")
    if origin == dest:
        raise InvalidDataError("origin and destination must differ")
    if k < 1:
        raise InvalidDataError("k must be >= 1")

    first = _min_key_path(graph, origin, dest, frozenset(), frozenset())
    if first is None:
        return []

    accepted: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = []
    candidates: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = []
    seen: set[tuple[str, ...]] = {first[1]}
    heapq.heappush(candidates, first)

    while candidates and len(accepted) < k:
        length, edges, nodes = heapq.heappop(candidates)
        accepted.append((length, edges, nodes))
        if len(accepted) == k:
            break
        for i in range(len(nodes) - 1):
            spur_node = nodes[i]
            root_edges = edges[:i]
            root_nodes = nodes[: i + 1]
            banned_edges: set[str] = set()
            for _, a_edges, a_nodes in accepted:
                if len(a_edges) > i and a_edges[:i] == root_edges and a_nodes[: i + 1] == root_nodes:
                    banned_edges.add(a_edges[i])
            banned_nodes = set(nodes[:i])
            spur = _min_key_path(graph, spur_node, dest, banned_nodes, banned_edges)
            if spur is not None:
                total_edges = root_edges + spur[1]
                if total_edges not in seen:
                    seen.add(total_edges)
                    total_nodes = root_nodes + spur[2][1:]
                    heapq.heappush(candidates, (_path_length(graph, total_edges), total_edges, total_nodes))

    return [build_route(graph, nodes, edges, mode) for _, edges, nodes in accepted]


def route_metrics(graph: StreetGraph, route: Route) -> RouteMetrics:
    """Length-weighted attribute summary of a route."""
    total = 0.0
    gradient_weighted = 0.0
    crossings = 0
    footpath_covered = 0.0
    bike_lane_covered = 0.0
    for eid in route.edge_ids:
        if eid not in graph.edges:
            raise NotFoundError(f"route references unknown edge {eid!r}")
        edge = graph.edges[eid]
        total += edge.length_m
        gradient_weighted += edge.length_m * edge.gradient_pct
        crossings += edge.crossings
        if edge.footpath:
            footpath_covered += edge.length_m
        if edge.segregated_bike_lane:
            bike_lane_covered += edge.length_m
    if total <= 0:
        raise InvalidDataError("route has no length")
    return RouteMetrics(
        length_m=total,
        mean_gradient_pct=gradient_weighted / total,
        total_crossings=crossings,
        footpath_fraction=min(1.0, footpath_covered / total),
        bike_lane_fraction=min(1.0, bike_lane_covered / total),
    )


def screen_feasible(current_length_m: float, candidate: Route, metrics: RouteMetrics) -> FeasibilityReport:
    """Evaluate the eight alternative-route feasibility rules.

    Rules whose condition on the current route or mode does not hold report
    not-applicable; ``overall`` is the conjunction of the applicable verdicts.
    At a current length of exactly 3 km both detour-slack rules apply and the
    stricter one governs through the conjunction.
    """
    mode = candidate.mode
    length = candidate.length_m
    detour = length - current_length_m

    verdicts: dict[str, Verdict] = {}

    def rule(rule_id: str, applicable: bool, passed: bool) -> None:
        if not applicable:
            verdicts[rule_id] = Verdict.NOT_APPLICABLE
        else:
            verdicts[rule_id] = Verdict.PASS if passed else Verdict.FAIL

    rule("R1", mode is TravelMode.CYCLE and current_length_m <= CYCLE_CURRENT_CUTOFF_M, length <= MAX_CYCLE_LENGTH_M)
    rule("R2", mode is TravelMode.WALK and current_length_m <= WALK_CURRENT_CUTOFF_M, length <= MAX_WALK_LENGTH_M)
    rule("R3", current_length_m <= DETOUR_CUTOFF_M, detour <= SHORT_DETOUR_SLACK_M)
    rule("R4", current_length_m >= DETOUR_CUTOFF_M, detour <= LONG_DETOUR_SLACK_M)
    rule("R5", mode is TravelMode.WALK, metrics.footpath_fraction >= 1.0)
    rule("R6", mode is TravelMode.CYCLE, metrics.bike_lane_fraction >= MIN_BIKE_LANE_FRACTION)
    rule("R7", True, metrics.total_crossings <= MAX_CROSSINGS)
    rule("R8", True, metrics.mean_gradient_pct <= MAX_MEAN_GRADIENT_PCT)

    overall = all(v is not Verdict.FAIL for v in verdicts.values())
    return FeasibilityReport(verdicts=verdicts, overall=overall)


def generate_alternatives(
    graph: StreetGraph,
    origin: str,
    dest: str,
    mode: TravelMode,
    k: int = DEFAULT_K,
    *,
    current_route: Route | None = None,
    current_length_m: float | None = None,
) -> list[tuple[Route, RouteMetrics, FeasibilityReport]]:
    """Feasible alternative routes, in the k-shortest (length-ascending) order.

    ``current_length_m`` defaults to the current route's length; pass it
    explicitly when the current route is a recorded geometry rather than a
    graph path (e.g. a car trip). A candidate whose edge sequence equals the
    current route's is dropped.
    """
    if current_length_m is None:
        if current_route is None:
            raise InvalidDataError("either current_route or current_length_m is required")
        current_length_m = current_route.length_m
    results = []
    for candidate in k_shortest_paths(graph, origin, dest, k, mode):
        if current_route is not None and candidate.edge_ids == current_route.edge_ids:
            continue
        metrics = route_metrics(graph, candidate)
        report = screen_feasible(current_length_m, candidate, metrics)
        if report.overall:
            results.append((candidate, metrics, report))
    return results
