"""Independent brute-force oracles the tests check the package against.

Nothing here calls into the implementation paths under test: path sets come
from exhaustive DFS enumeration, raster lookups from a full nearest-center
scan, resampling from a separate arc-walk, and means from plain re-summation.
"""
from __future__ import annotations

import math
from collections import defaultdict

import numpy as np


def path_length(graph, edge_ids) -> float:
    total = 0.0
    for eid in edge_ids:
        total += graph.edges[eid].length_m
    return total


def enumerate_simple_paths(graph, origin: str, dest: str) -> list[tuple[float, tuple[str, ...], tuple[str, ...]]]:
    """All simple paths origin->dest as (length, edge_ids, node_ids),
    sorted by (length, edge-id sequence). Handles parallel edges."""
    adjacency = defaultdict(list)
    for eid, edge in graph.edges.items():
        if edge.from_node != edge.to_node:
            adjacency[edge.from_node].append((eid, edge.to_node))
            adjacency[edge.to_node].append((eid, edge.from_node))
    results: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = []
    edge_stack: list[str] = []
    node_stack: list[str] = [origin]
    visited = {origin}

    def dfs(node: str) -> None:
        if node == dest:
            edges = tuple(edge_stack)
            results.append((path_length(graph, edges), edges, tuple(node_stack)))
            return
        for eid, neighbour in adjacency[node]:
            if neighbour in visited:
                continue
            visited.add(neighbour)
            edge_stack.append(eid)
            node_stack.append(neighbour)
            dfs(neighbour)
            node_stack.pop()
            edge_stack.pop()
            visited.discard(neighbour)

    dfs(origin)
    results.sort(key=lambda item: (item[0], item[1]))
    return results


def enumerate_paths_within(graph, origin: str, dest: str, max_length: float):
    """All simple paths with total length <= max_length, sorted by (length, edges).

    Length-pruned DFS, so it stays tractable on graphs whose unbounded simple
    path count explodes.
    """
    adjacency = defaultdict(list)
    for eid, edge in graph.edges.items():
        if edge.from_node != edge.to_node:
            adjacency[edge.from_node].append((eid, edge.to_node, edge.length_m))
            adjacency[edge.to_node].append((eid, edge.from_node, edge.length_m))
    results = []
    edge_stack: list[str] = []
    node_stack = [origin]
    visited = {origin}

    def dfs(node: str, used: float) -> None:
        if node == dest:
            edges = tuple(edge_stack)
            results.append((path_length(graph, edges), edges, tuple(node_stack)))
            return
        for eid, neighbour, length in adjacency[node]:
            if neighbour in visited or used + length > max_length + 1e-9:
                continue
            visited.add(neighbour)
            edge_stack.append(eid)
            node_stack.append(neighbour)
            dfs(neighbour, used + length)
            node_stack.pop()
            edge_stack.pop()
            visited.discard(neighbour)

    dfs(origin, 0.0)
    results.sort(key=lambda item: (item[0], item[1]))
    return results


def nearest_node_scan(graph, p) -> tuple[str, float]:
    best = min(
        ((math.hypot(n.position.x - p[0], n.position.y - p[1]), nid) for nid, n in graph.nodes.items()),
        key=lambda item: (item[0], item[1]),
    )
    return best[1], best[0]


def nearest_center_scan(values, xll, yll, cell_size, nodata, points) -> list[float | None]:
    """Nearest-cell-center lookup over every cell, vectorized, chunked.

    Distance ties prefer the greater row then greater column index, matching
    the greater-index convention for points on cell boundaries.
    """
    values = np.asarray(values, dtype=np.float64)
    nrows, ncols = values.shape
    y_top = yll + nrows * cell_size
    centers_x = xll + (np.arange(ncols) + 0.5) * cell_size
    centers_y = y_top - (np.arange(nrows) + 0.5) * cell_size
    out: list[float | None] = []
    for px, py in points:
        if not (xll <= px <= xll + ncols * cell_size and yll <= py <= y_top):
            out.append(None)
            continue
        dx2 = (centers_x - px) ** 2
        dy2 = (centers_y - py) ** 2
        d2 = dy2[:, None] + dx2[None, :]
        best = d2.min()
        rows, cols = np.nonzero(d2 == best)
        pick = max(zip(rows.tolist(), cols.tolist()))
        value = float(values[pick[0], pick[1]])
        out.append(None if value == nodata else value)
    return out


def resample_walk(geometry, interval: float) -> list[tuple[float, float]]:
    """Arc-length resampling re-derived independently (bisect over cumulative lengths)."""
    import bisect

    pts = [(float(p[0]), float(p[1])) for p in geometry]
    cum = [0.0]
    for (ax, ay), (bx, by) in zip(pts, pts[1:]):
        cum.append(cum[-1] + math.hypot(bx - ax, by - ay))
    total = cum[-1]
    targets = []
    i = 0
    while i * interval <= total + 1e-9:
        targets.append(min(i * interval, total))
        i += 1
    if total - targets[-1] > interval / 100.0:
        targets.append(total)
    samples = []
    for t in targets:
        j = bisect.bisect_right(cum, t) - 1
        j = min(j, len(pts) - 2)
        span = cum[j + 1] - cum[j]
        if span == 0:
            point = pts[j]
        else:
            f = (t - cum[j]) / span
            ax, ay = pts[j]
            bx, by = pts[j + 1]
            point = (ax + f * (bx - ax), ay + f * (by - ay))
        if point not in samples:
            samples.append(point)
    return samples


def mean_exposure_scan(values, xll, yll, cell_size, nodata, geometry, interval: float = 10.0):
    """(mean, sample_count, missing_count) by independent resample + scan + re-summation."""
    samples = resample_walk(geometry, interval)
    concs = nearest_center_scan(values, xll, yll, cell_size, nodata, samples)
    present = [c for c in concs if c is not None]
    if not present:
        return None, len(samples), len(samples)
    return sum(present) / len(present), len(samples), len(samples) - len(present)
