import csv
import io
import json

import pytest

from cleanroutes import Participant, RouteRecord, Workspace
from cleanroutes.reporting import build_report_data, write_report


@pytest.fixture()
def analyzed_ws(tmp_path, corridor):
    ws = Workspace(tmp_path / "store.sqlite")
    ws.ingest_network(json.dumps(corridor["network"]))
    ws.ingest_raster(corridor["raster"], 8)
    for raw in corridor["records"]["participants"]:
        ws.register_participant(Participant(id=raw["id"], consent=raw["consent"], answers=raw["answers"]))
    for raw in corridor["records"]["routes"]:
        ws.submit_route(RouteRecord.from_dict(raw))
        ws.compute_alternatives(f"{raw['project_id']}:{raw['route_id']}", k=corridor["params"]["k"], hour=8)
    return ws


def test_aggregation_matches_per_report_recount(analyzed_ws):
    reports = list(analyzed_ws.participant_reports("corridor").values())
    data = build_report_data(analyzed_ws, "corridor")
    n = len(reports)
    for label, idx in (("low", 0), ("moderate", 1), ("high", 2)):
        count = sum(1 for r in reports if int(r.current.category) == idx)
        assert data["category_distribution"][label] == round(100.0 * count / n, 1)
    cells = data["shift_matrix"]["cells"]
    for r in reports:
        row = int(r.best_alternative.category) if r.best_alternative else int(r.current.category)
        col = int(r.current.category)
        assert cells[row][col] > 0
    total = sum(sum(row) for row in cells)
    assert abs(total - 100.0) <= 0.5


def test_write_report_outputs(analyzed_ws, tmp_path):
    data = build_report_data(analyzed_ws, "corridor")
    written = write_report(data, tmp_path / "out")
    names = {p.name for p in written}
    assert "report.json" in names and "category_distribution.png" in names
    with open(tmp_path / "out" / "category_distribution.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["category", "percent"]
    assert [r[0] for r in rows[1:]] == ["low", "moderate", "high"]
    matrix_text = (tmp_path / "out" / "shift_matrix.txt").read_text()
    lines = matrix_text.strip().splitlines()
    assert len(lines) == 5
    assert lines[-1].startswith("Grand Total")


def test_write_report_no_figures_flag(analyzed_ws, tmp_path):
    data = build_report_data(analyzed_ws, "corridor")
    written = write_report(data, tmp_path / "out", figures=False)
    assert not any(p.suffix == ".png" for p in written)


def test_empty_report_well_formed(tmp_path):
    ws = Workspace(tmp_path / "empty.sqlite")
    data = build_report_data(ws, "ghost")
    assert data["n_analyzed_participants"] == 0
    assert data["category_distribution"] is None
    written = write_report(data, tmp_path / "out")
    assert (tmp_path / "out" / "report.json").exists()
    assert not any(p.suffix == ".png" for p in written)
    eff_rows = (tmp_path / "out" / "effectiveness.csv").read_text().splitlines()
    assert len(eff_rows) == 2
