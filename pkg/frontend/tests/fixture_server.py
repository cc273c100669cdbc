"""Start a cleanroutes service seeded with the corridor-city fixture.

Usage: python3 fixture_server.py PORT [STORE_DIR]
Prints "READY <port>" once the app is constructed, then serves until killed.
"""
import json
import sys
import tempfile
from pathlib import Path

import uvicorn

from cleanroutes import Participant, Workspace
from cleanroutes.synth import corridor_city
from cleanroutes.webapi import create_app


def main() -> None:
    port = int(sys.argv[1])
    store_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else Path(tempfile.mkdtemp(prefix="cleanroutes-ui-"))
    store_dir.mkdir(parents=True, exist_ok=True)
    fixture = corridor_city()
    workspace = Workspace(store_dir / "fixture.sqlite")
    workspace.ingest_network(json.dumps(fixture["network"]))
    workspace.ingest_raster(fixture["raster"], fixture["params"]["hour"])
    workspace.register_participant(Participant(id="web-parent", consent=True, answers={}))
    app = create_app(workspace=workspace)
    print(f"READY {port}", flush=True)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


if __name__ == "__main__":
    main()
