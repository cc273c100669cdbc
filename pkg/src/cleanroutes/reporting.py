"""Cohort report emission: delimited data, canonical JSON, and figure files.

``build_report_data`` aggregates a project's analyses into the category
distribution, the category-shift matrix, within-category delta statistics,
and the effectiveness summary. ``write_report`` writes those as CSV + JSON
and, by default, renders companion matplotlib figures next to them. All
outputs are byte-stable for fixed inputs.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .benefit import CATEGORIES, ShiftMatrix, render_shift_matrix
from .store import canonical_json
from .workflow import Workspace

_CATEGORY_LABELS = [c.label for c in CATEGORIES]
_FIGURE_COLORS = {"low": "#2e8b57", "moderate": "#d4a017", "high": "#c0392b"}


def build_report_data(workspace: Workspace, project_id: str | None = None) -> dict:
    """Aggregate one project's analyses into a serializable report."""
    matrix, stats = workspace.cohort(project_id)
    effectiveness = workspace.effectiveness(project_id)
    data: dict = {
        "project_id": project_id,
        "n_analyzed_participants": stats.n if stats else 0,
        "effectiveness": effectiveness.to_dict(),
    }
    if stats is None:
        data["category_distribution"] = None
        data["shift_matrix"] = None
        data["delta_stats"] = None
        return data
    data["category_distribution"] = {c.label: stats.distribution[c] for c in CATEGORIES}
    data["shift_matrix"] = {
        "cells": [list(row) for row in matrix.cells],
        "column_totals": list(matrix.column_totals),
        "grand_total": matrix.grand_total,
        "row_labels": _CATEGORY_LABELS,
        "column_labels": _CATEGORY_LABELS,
    }
    data["delta_stats"] = {
        c.label: (
            None
            if stats.within_category[c] is None
            else {
                "mean": stats.within_category[c].mean,
                "min": stats.within_category[c].min,
                "max": stats.within_category[c].max,
                "n": stats.within_category[c].n,
            }
        )
        for c in CATEGORIES
    }
    return data


def _csv_bytes(rows: list[list]) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _distribution_csv(data: dict) -> bytes:
    rows = [["category", "percent"]]
    dist = data.get("category_distribution") or {}
    for label in _CATEGORY_LABELS:
        if label in dist:
            rows.append([label, dist[label]])
    return _csv_bytes(rows)


def _matrix_csv(data: dict) -> bytes:
    rows = [["alternative_category"] + _CATEGORY_LABELS]
    m = data.get("shift_matrix")
    if m:
        for label, row in zip(_CATEGORY_LABELS, m["cells"]):
            rows.append([label] + list(row))
        rows.append(["grand_total"] + list(m["column_totals"]))
    return _csv_bytes(rows)


def _delta_stats_csv(data: dict) -> bytes:
    rows = [["category", "mean", "min", "max", "n"]]
    stats = data.get("delta_stats") or {}
    for label in _CATEGORY_LABELS:
        entry = stats.get(label)
        if entry:
            rows.append([label, entry["mean"], entry["min"], entry["max"], entry["n"]])
    return _csv_bytes(rows)


def _effectiveness_csv(data: dict) -> bytes:
    eff = data["effectiveness"]
    keys = ["n_participants", "n_with_beneficial_alternative", "n_switched", "switch_rate", "mean_rating"]
    return _csv_bytes([keys, [eff[k] for k in keys]])


def _save_figure(fig, path: Path) -> None:
    # Pin the PNG metadata so repeated runs are byte-identical regardless of
    # the installed matplotlib version string.
    fig.savefig(path, format="png", dpi=100, metadata={"Software": "cleanroutes"})
    plt.close(fig)


def _distribution_figure(data: dict, path: Path) -> None:
    dist = data["category_distribution"]
    values = [dist[label] for label in _CATEGORY_LABELS]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    bars = ax.bar(_CATEGORY_LABELS, values, color=[_FIGURE_COLORS[c] for c in _CATEGORY_LABELS])
    ax.bar_label(bars, fmt="%.1f")
    ax.set_ylabel("participants (%)")
    ax.set_title("Current-route exposure categories")
    ax.set_ylim(0, max(values + [1.0]) * 1.2)
    fig.tight_layout()
    _save_figure(fig, path)


def _matrix_figure(data: dict, path: Path) -> None:
    cells = data["shift_matrix"]["cells"]
    fig, ax = plt.subplots(figsize=(5, 4.2))
    im = ax.imshow(cells, cmap="Greens", vmin=0)
    ax.set_xticks(range(3), _CATEGORY_LABELS)
    ax.set_yticks(range(3), _CATEGORY_LABELS)
    ax.set_xlabel("current route category")
    ax.set_ylabel("alternative route category")
    ax.set_title("Category shift (% of participants)")
    vmax = max(max(row) for row in cells) or 1.0
    for r in range(3):
        for c in range(3):
            color = "white" if cells[r][c] > 0.6 * vmax else "black"
            ax.text(c, r, f"{cells[r][c]:.0f}", ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    _save_figure(fig, path)


def _delta_stats_figure(data: dict, path: Path) -> None:
    stats = data["delta_stats"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i, label in enumerate(_CATEGORY_LABELS):
        entry = stats.get(label)
        if not entry:
            continue
        ax.vlines(i, entry["min"], entry["max"], color=_FIGURE_COLORS[label], linewidth=2)
        ax.plot([i], [entry["mean"]], "o", color=_FIGURE_COLORS[label])
        ax.annotate(f"{entry['mean']:.2f}", (i, entry["mean"]), textcoords="offset points", xytext=(8, 0))
    ax.axhline(0.0, color="#888", linewidth=0.8, linestyle=":")
    ax.set_xticks(range(3), _CATEGORY_LABELS)
    ax.set_ylabel("exposure reduction (ug/m3)")
    ax.set_title("Within-category delta (min / mean / max)")
    fig.tight_layout()
    _save_figure(fig, path)


def write_report(data: dict, out_dir: str | Path, *, figures: bool = True) -> list[Path]:
    """Write report files into ``out_dir`` and return their paths.

    Emits report.json plus one CSV per table; with ``figures`` also one PNG
    per table (skipped when the project holds no analyzed participants, like
    the matrix itself).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, body: bytes) -> None:
        path = out / name
        path.write_bytes(body)
        written.append(path)

    emit("report.json", (canonical_json(data) + "\n").encode("utf-8"))
    emit("category_distribution.csv", _distribution_csv(data))
    emit("shift_matrix.csv", _matrix_csv(data))
    emit("delta_stats.csv", _delta_stats_csv(data))
    emit("effectiveness.csv", _effectiveness_csv(data))
    if data.get("shift_matrix"):
        m = data["shift_matrix"]
        matrix = ShiftMatrix(
            cells=tuple(tuple(row) for row in m["cells"]),
            column_totals=tuple(m["column_totals"]),
            grand_total=m["grand_total"],
        )
        emit("shift_matrix.txt", (render_shift_matrix(matrix) + "\n").encode("utf-8"))
    if figures and data.get("category_distribution"):
        _distribution_figure(data, out / "category_distribution.png")
        written.append(out / "category_distribution.png")
        _matrix_figure(data, out / "shift_matrix.png")
        written.append(out / "shift_matrix.png")
        _delta_stats_figure(data, out / "delta_stats.png")
        written.append(out / "delta_stats.png")
    return written
