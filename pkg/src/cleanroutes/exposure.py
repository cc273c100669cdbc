"""NO2 exposure scoring: raster ingestion, route resampling, nearest-cell lookup.

Concentration fields arrive as ESRI ASCII grids (one per hour of day). Route
geometry is resampled every 10 m, each sample is assigned the value of the
raster cell containing it, and the route's exposure is the arithmetic mean
over the sampled points. Rasters are immutable after load and safe to share
across threads.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .errors import CoverageError, InvalidDataError, ParseError
from .network import Coord

DEFAULT_SAMPLE_INTERVAL_M = 10.0
DEFAULT_HOUR = 8  # school-run morning field

LOW_CATEGORY_MAX = 40.0
MODERATE_CATEGORY_MAX = 50.0


class ExposureCategory(enum.IntEnum):
    """Exposure bands; the integer values give the Low < Moderate < High order."""

    LOW = 0
    MODERATE = 1
    HIGH = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "ExposureCategory":
        try:
            return cls[label.upper()]
        except KeyError:
            raise InvalidDataError(f"unknown exposure category {label!r}") from None


#: Map display color tokens, one per category.
CATEGORY_COLORS = {
    ExposureCategory.LOW: "green",
    ExposureCategory.MODERATE: "yellow",
    ExposureCategory.HIGH: "red",
}


@dataclass(frozen=True)
class ConcentrationRaster:
    """Hour-of-day NO2 field on a regular grid; row 0 is the northernmost line."""

    hour: int
    origin: Coord  # lower-left corner of the lower-left cell
    cell_size: float
    ncols: int
    nrows: int
    values: np.ndarray
    nodata: float

    @property
    def x_max(self) -> float:
        return self.origin.x + self.ncols * self.cell_size

    @property
    def y_max(self) -> float:
        return self.origin.y + self.nrows * self.cell_size


@dataclass(frozen=True)
class SamplePoint:
    position: Coord
    concentration: float | None  # None when outside the raster or NODATA


@dataclass(frozen=True)
class ExposureSummary:
    """Scored route: mean over non-missing samples.

    ``sample_count`` is the total number of resampled points (>= 2 for any
    route); ``missing_count`` of them fell outside coverage or on NODATA cells
    and were excluded from the mean.
    """

    mean_concentration: float
    category: ExposureCategory
    sample_count: int
    missing_count: int


_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def _read_text(source: bytes | str | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def load_raster(source: bytes | str | IO, hour: int = DEFAULT_HOUR) -> ConcentrationRaster:
    """Parse an ESRI ASCII grid into a ConcentrationRaster.

    The six header lines may appear in any order (keys case-insensitive);
    the body must hold exactly nrows lines of ncols numbers, first line the
    northernmost row. Parse errors carry the offending 1-based line number.
    """
    if not isinstance(hour, int) or isinstance(hour, bool) or not 0 <= hour <= 23:
        raise InvalidDataError(f"hour must be an integer in 0..23, got {hour!r}")
    lines = _read_text(source).splitlines()
    header: dict[str, float] = {}
    body_start = 0
    for lineno, line in enumerate(lines, start=1):
        if len(header) == len(_HEADER_KEYS):
            body_start = lineno - 1
            break
        parts = line.split()
        if not parts:
            continue
        key = parts[0].lower()
        if key not in _HEADER_KEYS:
            raise ParseError(f"line {lineno}: expected header key, got {parts[0]!r}", line=lineno)
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: header line must be 'key value'", line=lineno)
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric header value {parts[1]!r}", line=lineno) from None
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise ParseError(f"missing header keys: {', '.join(missing)}")

    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    if ncols <= 0 or nrows <= 0:
        raise InvalidDataError(f"ncols/nrows must be positive, got {ncols}x{nrows}")
    cell_size = header["cellsize"]
    if not cell_size > 0:
        raise InvalidDataError(f"cellsize must be > 0, got {cell_size!r}")
    nodata = header["nodata_value"]

    rows: list[list[float]] = []
    lineno = body_start
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        parts = line.split()
        if not parts:
            continue
        if len(rows) == nrows:
            raise ParseError(f"line {lineno}: extra data beyond declared {nrows} rows", line=lineno)
        try:
            row = [float(v) for v in parts]
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric cell value", line=lineno) from None
        if len(row) != ncols:
            raise ParseError(
                f"line {lineno}: expected {ncols} values, got {len(row)}", line=lineno
            )
        rows.append(row)
    if len(rows) != nrows:
        raise ParseError(
            f"line {lineno}: body ended after {len(rows)} of {nrows} declared rows", line=lineno
        )

    values = np.array(rows, dtype=np.float64)
    data_mask = values != nodata
    if not np.all(np.isfinite(values[data_mask]) & (values[data_mask] >= 0)):
        raise InvalidDataError("raster contains negative or non-finite concentration values")
    return ConcentrationRaster(
        hour=hour,
        origin=Coord(header["xllcorner"], header["yllcorner"]),
        cell_size=cell_size,
        ncols=ncols,
        nrows=nrows,
        values=values,
        nodata=nodata,
    )


def lookup_concentration(raster: ConcentrationRaster, p: Coord) -> float | None:
    """Value of the raster cell containing ``p``, or None outside the extent.

    A point exactly on an internal cell boundary belongs to the cell with the
    greater column/row index (equivalently: nearest cell center, ties east
    and south); points on the outer extent edge belong to the outermost cell.
    NODATA cells read as None.
    """
    x, y = p
    if not (raster.origin.x <= x <= raster.x_max and raster.origin.y <= y <= raster.y_max):
        return None
    col = int(math.floor((x - raster.origin.x) / raster.cell_size))
    row = int(math.floor((raster.y_max - y) / raster.cell_size))
    col = min(col, raster.ncols - 1)
    row = min(row, raster.nrows - 1)
    value = float(raster.values[row, col])
    if value == raster.nodata:
        return None
    return value


def resample_route(geometry: Sequence[Coord], interval: float = DEFAULT_SAMPLE_INTERVAL_M) -> list[Coord]:
    """Points every ``interval`` meters of arc length along a polyline.

    Samples sit at arc positions 0, interval, 2*interval, ...; the final
    endpoint is additionally emitted when it is more than interval/100 past
    the last regular sample. Exact duplicate positions are dropped.
    """
    if interval <= 0:
        raise InvalidDataError(f"interval must be > 0, got {interval!r}")
    points = [Coord(float(p[0]), float(p[1])) for p in geometry]
    if len(points) < 2:
        raise InvalidDataError("geometry must hold at least 2 points")
    cumulative = [0.0]
    for a, b in zip(points, points[1:]):
        cumulative.append(cumulative[-1] + math.hypot(b.x - a.x, b.y - a.y))
    total = cumulative[-1]
    if total <= 0:
        raise InvalidDataError("degenerate zero-length geometry")

    n_regular = int(math.floor(total / interval + 1e-9))
    targets = [i * interval for i in range(n_regular + 1)]
    if total - targets[-1] > interval / 100.0:
        targets.append(total)

    samples: list[Coord] = []
    seen: set[Coord] = set()
    seg = 0
    for t in targets:
        t = min(t, total)
        while seg < len(cumulative) - 2 and cumulative[seg + 1] < t:
            seg += 1
        seg_len = cumulative[seg + 1] - cumulative[seg]
        if seg_len == 0:
            sample = points[seg]
        else:
            frac = (t - cumulative[seg]) / seg_len
            a, b = points[seg], points[seg + 1]
            sample = Coord(a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y))
        if sample not in seen:
            seen.add(sample)
            samples.append(sample)
    return samples


def sample_route(
    raster: ConcentrationRaster,
    geometry: Sequence[Coord],
    interval: float = DEFAULT_SAMPLE_INTERVAL_M,
) -> list[SamplePoint]:
    """Resampled points paired with their looked-up concentrations."""
    return [
        SamplePoint(position=p, concentration=lookup_concentration(raster, p))
        for p in resample_route(geometry, interval)
    ]


def categorize(mean: float) -> ExposureCategory:
    """Exposure band of a mean concentration: Low <= 40 < Moderate <= 50 < High."""
    if not math.isfinite(mean) or mean < 0:
        raise InvalidDataError(f"mean concentration must be finite and >= 0, got {mean!r}")
    if mean <= LOW_CATEGORY_MAX:
        return ExposureCategory.LOW
    if mean <= MODERATE_CATEGORY_MAX:
        return ExposureCategory.MODERATE
    return ExposureCategory.HIGH


def route_exposure(
    raster: ConcentrationRaster,
    geometry: Sequence[Coord],
    interval: float = DEFAULT_SAMPLE_INTERVAL_M,
) -> ExposureSummary:
    """Mean exposure along a route; every sample point carries weight one.

    Missing samples (outside extent or NODATA) are excluded from the mean and
    reported in ``missing_count``; a route with no scoreable point at all
    raises CoverageError.
    """
    samples = sample_route(raster, geometry, interval)
    present = [s.concentration for s in samples if s.concentration is not None]
    if not present:
        raise CoverageError("route outside raster coverage")
    mean = sum(present) / len(present)
    return ExposureSummary(
        mean_concentration=mean,
        category=categorize(mean),
        sample_count=len(samples),
        missing_count=len(samples) - len(present),
    )


def rank_alternatives(scored: Sequence[tuple]) -> list:
    """Sort (Route, ExposureSummary) pairs by ascending mean concentration.

    Ties go to the shorter route, then to the lexicographically smaller
    edge-id sequence, so the ranking is deterministic.
    """
    return sorted(
        scored,
        key=lambda item: (item[1].mean_concentration, item[0].length_m, item[0].edge_ids),
    )
