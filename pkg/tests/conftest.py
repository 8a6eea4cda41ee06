import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import connected_graphs_up_to_iso  # noqa: E402

import linerigidity as lr  # noqa: E402


@pytest.fixture(scope="session")
def small_graphs():
    """Connected simple graphs with <= 6 vertices and <= 8 edges, up to iso."""
    return connected_graphs_up_to_iso(6, max_edges=8)


@pytest.fixture(scope="session")
def graphs_up_to_7():
    """All connected simple graphs with <= 7 vertices, up to iso."""
    return connected_graphs_up_to_iso(7)


@pytest.fixture
def triangle():
    return lr.build_multigraph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def k4():
    return lr.build_multigraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def theta():
    # vertices 0 and 1 joined by three paths with 1, 1, 2 interior vertices
    return lr.build_multigraph(
        6, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)])


@pytest.fixture
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return lr.build_multigraph(10, outer + inner + spokes)
