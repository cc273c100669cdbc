import json

import pytest

from cleanroutes import load_network, load_raster
from cleanroutes.synth import corridor_city, grid_network_document, raster_text


@pytest.fixture(scope="session")
def grid_10x10():
    """10x10 grid city: 100 nodes, 180 edges, 100 m blocks."""
    return load_network(json.dumps(grid_network_document(10, 10)))


@pytest.fixture(scope="session")
def grid_4x4():
    return load_network(json.dumps(grid_network_document(4, 4)))


@pytest.fixture(scope="session")
def corridor():
    """The fully-known corridor-city fixture bundle."""
    return corridor_city()


@pytest.fixture(scope="session")
def corridor_raster(corridor):
    return load_raster(corridor["raster"], hour=corridor["params"]["hour"])


@pytest.fixture()
def uniform_raster_text():
    def make(value: float, ncols: int = 20, nrows: int = 20, xll: float = 0.0, yll: float = 0.0, cell: float = 10.0):
        return raster_text([[value] * ncols for _ in range(nrows)], xll, yll, cell)

    return make
