import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cleanroutes.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _write_fixture(tmp_path, corridor):
    (tmp_path / "network.json").write_text(json.dumps(corridor["network"]))
    (tmp_path / "raster.asc").write_text(corridor["raster"])
    (tmp_path / "records.json").write_text(json.dumps(corridor["records"]))
    return tmp_path


def _ingest_all(runner, tmp_path, corridor):
    store = str(tmp_path / "store.sqlite")
    _write_fixture(tmp_path, corridor)
    for args in (
        ["--store", store, "ingest-network", "--network", str(tmp_path / "network.json")],
        ["--store", store, "ingest-raster", "--raster", f"8={tmp_path / 'raster.asc'}"],
        ["--store", store, "import-routes", str(tmp_path / "records.json")],
    ):
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output + str(result.exception)
    return store


def test_full_batch_run(runner, tmp_path, corridor):
    store = _ingest_all(runner, tmp_path, corridor)
    result = runner.invoke(main, ["--store", store, "analyze-all", "--k", "50", "--hour", "8"])
    assert result.exit_code == 0, result.output
    assert "analyzed 3 routes" in result.output
    out_dir = tmp_path / "report"
    result = runner.invoke(main, ["--store", store, "report", "--project", "corridor", "--out", str(out_dir)])
    assert result.exit_code == 0, result.output
    names = {p.name for p in out_dir.iterdir()}
    assert {"report.json", "category_distribution.csv", "shift_matrix.csv",
            "delta_stats.csv", "effectiveness.csv", "shift_matrix.txt"} <= names
    assert {"category_distribution.png", "shift_matrix.png", "delta_stats.png"} <= names
    data = json.loads((out_dir / "report.json").read_text())
    assert data["n_analyzed_participants"] == 3
    # pA high->low shift, pB and pC stay low
    assert data["shift_matrix"]["cells"][0][2] == 33.3
    assert data["category_distribution"] == {"low": 66.7, "moderate": 0.0, "high": 33.3}


def test_report_byte_stable(runner, tmp_path, corridor):
    store = _ingest_all(runner, tmp_path, corridor)
    assert runner.invoke(main, ["--store", store, "analyze-all", "--k", "50"]).exit_code == 0
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert runner.invoke(main, ["--store", store, "report", "--out", str(out1)]).exit_code == 0
    assert runner.invoke(main, ["--store", store, "report", "--out", str(out2)]).exit_code == 0
    files1 = sorted(p.name for p in out1.iterdir())
    assert files1 == sorted(p.name for p in out2.iterdir())
    for name in files1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_malformed_raster_exits_2(runner, tmp_path):
    bad = tmp_path / "bad.asc"
    bad.write_text("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\nNODATA_value -9999\n1 2\n3\n")
    result = runner.invoke(main, ["--store", str(tmp_path / "s.sqlite"), "ingest-raster", "--raster", f"8={bad}"])
    assert result.exit_code == 2
    err = json.loads(result.stderr)
    assert err["error"] == "ParseError"
    assert "line 8" in err["detail"]


def test_malformed_network_exits_2(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = runner.invoke(main, ["--store", str(tmp_path / "s.sqlite"), "ingest-network", "--network", str(bad)])
    assert result.exit_code == 2
    assert json.loads(result.stderr)["error"] == "ParseError"


def test_report_on_empty_store(runner, tmp_path):
    out_dir = tmp_path / "empty_report"
    result = runner.invoke(main, ["--store", str(tmp_path / "s.sqlite"), "report", "--out", str(out_dir)])
    assert result.exit_code == 0, result.output
    data = json.loads((out_dir / "report.json").read_text())
    assert data["n_analyzed_participants"] == 0
    assert data["shift_matrix"] is None
    assert data["effectiveness"]["n_participants"] == 0
    # delimited outputs exist with headers only
    assert (out_dir / "shift_matrix.csv").read_text().startswith("alternative_category")
    assert not (out_dir / "shift_matrix.png").exists()


def test_analysis_failure_reports_and_exits_1(runner, tmp_path, corridor):
    store = str(tmp_path / "s.sqlite")
    _write_fixture(tmp_path, corridor)
    assert runner.invoke(main, ["--store", store, "ingest-network", "--network",
                                str(tmp_path / "network.json")]).exit_code == 0
    # raster ingested for a different hour: analyze-all at hour 8 must fail cleanly
    assert runner.invoke(main, ["--store", store, "ingest-raster", "--raster",
                                f"9={tmp_path / 'raster.asc'}"]).exit_code == 0
    assert runner.invoke(main, ["--store", store, "import-routes",
                                str(tmp_path / "records.json")]).exit_code == 0
    result = runner.invoke(main, ["--store", store, "analyze-all", "--hour", "8"])
    assert result.exit_code == 1
    first_error = json.loads(result.stderr.splitlines()[0])
    assert first_error["error"] == "ConflictError"


def test_store_env_var(runner, tmp_path, corridor, monkeypatch):
    _write_fixture(tmp_path, corridor)
    store = tmp_path / "env.sqlite"
    monkeypatch.setenv("CLEANROUTES_STORE", str(store))
    result = runner.invoke(main, ["ingest-network", "--network", str(tmp_path / "network.json")])
    assert result.exit_code == 0
    assert store.exists()
