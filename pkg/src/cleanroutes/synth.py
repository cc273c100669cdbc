"""Synthetic test-bed generators: grid-city networks and banded concentration fields.

These build small, fully-known worlds (regular street grids, rasters with a
polluted corridor) that tests and demo servers can reason about in closed
form. Everything is deterministic: ids are zero-padded, values are exact.
"""
from __future__ import annotations

from typing import Sequence


def grid_node_id(col: int, row: int) -> str:
    return f"n{col:02d}-{row:02d}"


def grid_edge_id(kind: str, col: int, row: int) -> str:
    return f"{kind}{col:02d}-{row:02d}"


def grid_network_document(
    n_cols: int,
    n_rows: int,
    spacing: float = 100.0,
    origin: tuple[float, float] = (0.0, 0.0),
    base_attrs: dict | None = None,
    overrides: dict[str, dict] | None = None,
) -> dict:
    """Network JSON document for an n_cols x n_rows grid of nodes.

    Horizontal edges are named h{col}-{row} (from col to col+1), vertical
    edges v{col}-{row} (from row to row+1). ``overrides`` patches individual
    edges by id (e.g. to drop a footpath or add crossings).
    """
    attrs = {
        "gradient_pct": 0.0,
        "footpath": True,
        "segregated_bike_lane": True,
        "crossings": 0,
    }
    if base_attrs:
        attrs.update(base_attrs)
    overrides = overrides or {}
    x0, y0 = origin

    def xy(col: int, row: int) -> tuple[float, float]:
        return (x0 + col * spacing, y0 + row * spacing)

    nodes = [
        {"id": grid_node_id(c, r), "x": xy(c, r)[0], "y": xy(c, r)[1]}
        for r in range(n_rows)
        for c in range(n_cols)
    ]
    edges = []
    for r in range(n_rows):
        for c in range(n_cols - 1):
            eid = grid_edge_id("h", c, r)
            edge = {
                "id": eid,
                "from": grid_node_id(c, r),
                "to": grid_node_id(c + 1, r),
                "length_m": spacing,
                "geometry": [list(xy(c, r)), list(xy(c + 1, r))],
                **attrs,
            }
            edge.update(overrides.get(eid, {}))
            edges.append(edge)
    for r in range(n_rows - 1):
        for c in range(n_cols):
            eid = grid_edge_id("v", c, r)
            edge = {
                "id": eid,
                "from": grid_node_id(c, r),
                "to": grid_node_id(c, r + 1),
                "length_m": spacing,
                "geometry": [list(xy(c, r)), list(xy(c, r + 1))],
                **attrs,
            }
            edge.update(overrides.get(eid, {}))
            edges.append(edge)
    return {"crs": "local-planar-m", "nodes": nodes, "edges": edges}


def raster_text(
    values: Sequence[Sequence[float]],
    xll: float,
    yll: float,
    cell_size: float,
    nodata: float = -9999.0,
) -> str:
    """ESRI ASCII grid text for a values matrix (row 0 = northernmost)."""
    nrows = len(values)
    ncols = len(values[0])
    lines = [
        f"ncols {ncols}",
        f"nrows {nrows}",
        f"xllcorner {xll:g}",
        f"yllcorner {yll:g}",
        f"cellsize {cell_size:g}",
        f"NODATA_value {nodata:g}",
    ]
    for row in values:
        lines.append(" ".join(f"{v:g}" for v in row))
    return "\n".join(lines) + "\n"


def banded_values(
    ncols: int,
    nrows: int,
    yll: float,
    cell_size: float,
    background: float,
    bands: Sequence[tuple[float, float, float]],
) -> list[list[float]]:
    """Value matrix where a cell takes a band's value when its center y falls
    inside the band's [y_lo, y_hi] interval; later bands win overlaps."""
    y_top = yll + nrows * cell_size
    rows = []
    for r in range(nrows):
        center_y = y_top - (r + 0.5) * cell_size
        value = background
        for y_lo, y_hi, band_value in bands:
            if y_lo <= center_y <= y_hi:
                value = band_value
        rows.append([value] * ncols)
    return rows


def value_at(
    p: tuple[float, float],
    yll: float,
    cell_size: float,
    nrows: int,
    background: float,
    bands: Sequence[tuple[float, float, float]],
) -> float:
    """Closed-form concentration at a point of a banded raster (matching
    banded_values through the same cell-center convention)."""
    y_top = yll + nrows * cell_size
    row = int((y_top - p[1]) // cell_size)
    row = min(row, nrows - 1)
    center_y = y_top - (row + 0.5) * cell_size
    value = background
    for y_lo, y_hi, band_value in bands:
        if y_lo <= center_y <= y_hi:
            value = band_value
    return value


def corridor_city() -> dict:
    """A fully-known end-to-end fixture: grid city with one polluted street.

    7x5 node grid (100 m blocks) over a 100x100-cell, 10 m raster. The street
    at y=100 sits in a 55 ug/m3 band, the street at y=0 in a 40 ug/m3 band,
    everything else reads 30. Three study routes:

    * A (cycle, home y=100): straight along the polluted street; the unique
      best alternative is the full detour via y=200, delta ~23.8 (>= 10).
    * B (walk, along y=400): both edges into the school corner lack a
      footpath, so no candidate survives screening (empty alternatives).
    * C (walk, drawn diagonally): leaves the band quickly; small positive
      delta with the best alternative climbing to y=200/y=300 immediately.

    Returns the network document, raster text, an import-routes document, and
    the closed-form expectations for the seeded pairs.
    """
    background = 30.0
    band_value = 55.0
    south_value = 40.0
    xll = yll = -50.0
    cell = 10.0
    ncols = nrows = 100
    bands = [(-10.0, 10.0, south_value), (90.0, 110.0, band_value)]

    overrides = {
        # school corner for pair B: no footpath on either approach
        grid_edge_id("h", 5, 4): {"footpath": False},
        grid_edge_id("v", 6, 3): {"footpath": False},
    }
    network = grid_network_document(7, 5, spacing=100.0, overrides=overrides)
    values = banded_values(ncols, nrows, yll, cell, background, bands)
    raster = raster_text(values, xll, yll, cell)

    participants = [
        {"id": "pA", "consent": True, "answers": {"awareness": "medium"}},
        {"id": "pB", "consent": True, "answers": {"awareness": "high"}},
        {"id": "pC", "consent": True, "answers": {"awareness": "low"}},
    ]
    routes = [
        {
            "project_id": "corridor",
            "route_id": "rA",
            "participant_id": "pA",
            "home": [0.0, 100.0],
            "school": [600.0, 100.0],
            "mode": "cycle",
            "geometry": [[0.0, 100.0], [600.0, 100.0]],
            "timestamp": "2019-03-01T08:05:00",
        },
        {
            "project_id": "corridor",
            "route_id": "rB",
            "participant_id": "pB",
            "home": [300.0, 400.0],
            "school": [600.0, 400.0],
            "mode": "walk",
            "geometry": [[300.0, 400.0], [600.0, 400.0]],
            "timestamp": "2019-03-01T08:10:00",
        },
        {
            "project_id": "corridor",
            "route_id": "rC",
            "participant_id": "pC",
            "home": [0.0, 100.0],
            "school": [600.0, 300.0],
            "mode": "walk",
            "geometry": [[0.0, 100.0], [600.0, 300.0]],
            "timestamp": "2019-03-01T08:15:00",
        },
    ]

    # Closed forms: sample counts along the known polylines (10 m interval,
    # endpoint rule) times the band/background values.
    current_a = band_value  # 61 samples, all in the band
    best_a = (4 * band_value + 77 * background) / 81  # full detour via y=200
    current_c = (4 * band_value + 61 * background) / 65  # diagonal, 65 samples
    best_c = (2 * band_value + 79 * background) / 81  # north-first staircase

    return {
        "network": network,
        "raster": raster,
        "records": {"participants": participants, "routes": routes},
        "params": {
            "background": background,
            "band_value": band_value,
            "south_value": south_value,
            "bands": bands,
            "xll": xll,
            "yll": yll,
            "cell_size": cell,
            "ncols": ncols,
            "nrows": nrows,
            "hour": 8,
            "k": 50,
        },
        "expected": {
            "corridor:rA": {
                "current_mean": current_a,
                "best_mean": best_a,
                "delta": current_a - best_a,
                "best_edges": [grid_edge_id("v", 0, 1)]
                + [grid_edge_id("h", c, 2) for c in range(6)]
                + [grid_edge_id("v", 6, 1)],
                "current_category": "high",
                "best_category": "low",
            },
            "corridor:rB": {"alternatives": 0, "current_mean": background},
            "corridor:rC": {
                "current_mean": current_c,
                "best_mean": best_c,
                "delta": current_c - best_c,
                "current_category": "low",
                "best_category": "low",
            },
        },
    }
