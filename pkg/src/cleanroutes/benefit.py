"""Switching-benefit quantification: deltas, category shifts, cohort aggregates, relative risk.

Relative risks are quoted per fixed NO2 increment (typically 10 ug/m3 of
annual mean); scaling to an arbitrary delta uses the standard log-linear
convention, RR(delta) = RR_unit ** (delta / unit). The built-in coefficient
catalog ships as a JSON data file so deployments can add endpoints without
code changes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Sequence

from .errors import InvalidDataError
from .exposure import ExposureCategory, ExposureSummary

CATEGORIES = (ExposureCategory.LOW, ExposureCategory.MODERATE, ExposureCategory.HIGH)


@dataclass(frozen=True)
class RiskModel:
    """A relative-risk coefficient for one health endpoint.

    ``rr_per_unit`` is the risk ratio quoted per ``unit_delta_ugm3`` of NO2;
    confidence bounds are carried as metadata only.
    """

    id: str
    endpoint: str
    rr_per_unit: float
    unit_delta_ugm3: float
    ci_low: float | None = None
    ci_high: float | None = None

    def __post_init__(self):
        if not self.rr_per_unit > 0:
            raise InvalidDataError(f"risk model {self.id!r}: rr_per_unit must be > 0")
        if not self.unit_delta_ugm3 > 0:
            raise InvalidDataError(f"risk model {self.id!r}: unit_delta_ugm3 must be > 0")


def load_risk_models(source: bytes | str | IO | Path | None = None) -> list[RiskModel]:
    """Risk-model catalog from a JSON array; defaults to the packaged catalog."""
    if source is None:
        text = resources.files("cleanroutes").joinpath("data/risk_models.json").read_text("utf-8")
    elif isinstance(source, Path):
        text = source.read_text("utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise InvalidDataError("risk-model catalog must be a JSON array")
    models = []
    for entry in raw:
        models.append(
            RiskModel(
                id=entry["id"],
                endpoint=entry["endpoint"],
                rr_per_unit=float(entry["rr_per_unit"]),
                unit_delta_ugm3=float(entry["unit_delta_ugm3"]),
                ci_low=entry.get("ci_low"),
                ci_high=entry.get("ci_high"),
            )
        )
    return models


def relative_risk(delta: float, model: RiskModel) -> float:
    """Risk ratio avoided by a concentration reduction of ``delta`` ug/m3.

    Log-linear in delta: RR(a + b) = RR(a) * RR(b); RR(0) = 1 exactly. A
    factor above 1 means risk avoided by a positive delta.
    """
    return model.rr_per_unit ** (delta / model.unit_delta_ugm3)


@dataclass(frozen=True)
class BenefitReport:
    """Per-participant switching gain against the best-ranked alternative.

    ``delta`` is current mean minus best-alternative mean, so positive means
    improvement; it is None exactly when no alternative exists. Negative
    deltas are preserved (some participants have no better route).
    """

    current: ExposureSummary
    best_alternative: ExposureSummary | None
    delta: float | None
    category_shift: tuple[ExposureCategory, ExposureCategory] | None
    risk_ratios: tuple[tuple[str, float], ...]


def compare(
    current: ExposureSummary,
    alternatives: Sequence[ExposureSummary],
    models: Sequence[RiskModel] = (),
) -> BenefitReport:
    """Benefit of switching from ``current`` to the first (best-ranked) alternative."""
    if not alternatives:
        return BenefitReport(
            current=current,
            best_alternative=None,
            delta=None,
            category_shift=None,
            risk_ratios=(),
        )
    best = alternatives[0]
    delta = current.mean_concentration - best.mean_concentration
    return BenefitReport(
        current=current,
        best_alternative=best,
        delta=delta,
        category_shift=(current.category, best.category),
        risk_ratios=tuple((m.id, relative_risk(delta, m)) for m in models),
    )


@dataclass(frozen=True)
class ShiftMatrix:
    """Category cross-tabulation: rows = alternative category, columns = current category.

    Cells are percentages of participants; participants without an
    alternative count on the diagonal. Column totals are computed from the
    raw counts (the current-route category distribution), the grand total
    from the rounded cells.
    """

    cells: tuple[tuple[float, float, float], ...]
    column_totals: tuple[float, float, float]
    grand_total: float
    n: int | None = None
    decimals: int = 1

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence[float]], decimals: int = 1) -> "ShiftMatrix":
        rows = tuple(tuple(float(v) for v in row) for row in cells)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InvalidDataError("shift matrix needs 3x3 cells")
        column_totals = tuple(round(sum(row[c] for row in rows), decimals) for c in range(3))
        grand_total = round(sum(sum(row) for row in rows), decimals)
        return cls(cells=rows, column_totals=column_totals, grand_total=grand_total, decimals=decimals)


def shift_matrix(reports: Sequence[BenefitReport], decimals: int = 1) -> ShiftMatrix:
    """Percentage cross-tabulation of current vs best-alternative categories."""
    if not reports:
        raise InvalidDataError("shift_matrix needs at least one report")
    counts = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    col_counts = [0, 0, 0]
    for report in reports:
        col = int(report.current.category)
        row = int(report.best_alternative.category) if report.best_alternative is not None else col
        counts[row][col] += 1
        col_counts[col] += 1
    n = len(reports)
    cells = tuple(tuple(round(100.0 * c / n, decimals) for c in row) for row in counts)
    column_totals = tuple(round(100.0 * c / n, decimals) for c in col_counts)
    grand_total = round(sum(sum(row) for row in cells), decimals)
    return ShiftMatrix(cells=cells, column_totals=column_totals, grand_total=grand_total, n=n, decimals=decimals)


def render_shift_matrix(matrix: ShiftMatrix, integers: bool = True) -> str:
    """Plain-text table: 3x3 cells plus a grand-total row of column sums.

    Integer display by default, mirroring how the matrix is conventionally
    published; pass integers=False to keep the configured decimals.
    """

    def fmt(v: float) -> str:
        return str(int(round(v))) if integers else f"{v:.{matrix.decimals}f}"

    labels = [c.label.capitalize() for c in CATEGORIES]
    header = ["Alternative \\ Current"] + labels
    rows = [header]
    for cat, row in zip(CATEGORIES, matrix.cells):
        rows.append([cat.label.capitalize()] + [fmt(v) for v in row])
    rows.append(["Grand Total"] + [fmt(v) for v in matrix.column_totals])
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for r in rows:
        lines.append("  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(r, widths))))
    return "\n".join(lines)


@dataclass(frozen=True)
class DeltaStats:
    mean: float
    min: float
    max: float
    n: int


@dataclass(frozen=True)
class CohortStats:
    """Current-route category distribution plus within-category delta statistics.

    ``within_category`` covers only participants whose category is unchanged
    by the best alternative; categories with no such participant map to None.
    """

    distribution: dict[ExposureCategory, float]
    within_category: dict[ExposureCategory, DeltaStats | None]
    n: int


def cohort_stats(reports: Sequence[BenefitReport], decimals: int = 1) -> CohortStats:
    """Aggregate a cohort of benefit reports (distribution and unchanged-category deltas)."""
    if not reports:
        raise InvalidDataError("cohort_stats needs at least one report")
    n = len(reports)
    dist_counts = {c: 0 for c in CATEGORIES}
    deltas: dict[ExposureCategory, list[float]] = {c: [] for c in CATEGORIES}
    for report in reports:
        cat = report.current.category
        dist_counts[cat] += 1
        if report.delta is not None and report.category_shift is not None:
            frm, to = report.category_shift
            if frm == to:
                deltas[frm].append(report.delta)
    distribution = {c: round(100.0 * dist_counts[c] / n, decimals) for c in CATEGORIES}
    within = {}
    for c in CATEGORIES:
        values = deltas[c]
        if values:
            within[c] = DeltaStats(mean=sum(values) / len(values), min=min(values), max=max(values), n=len(values))
        else:
            within[c] = None
    return CohortStats(distribution=distribution, within_category=within, n=n)
