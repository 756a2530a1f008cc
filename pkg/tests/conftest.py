import numpy as np
import pytest

from maxlight import (GraphMap, GraphPatch, assign_heights,
                      boundary_data_from_vertices, solve_jumps)

SQUARE = np.array([[0.0, 0.0], [np.pi, 0.0], [np.pi, np.pi], [0.0, np.pi]])
SQUARE_LABELS = ("A", "B", "A", "B")


def regular_hexagon(side: float = 1.0) -> np.ndarray:
    ang = np.pi / 3.0 * np.arange(6)
    e = side * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return np.vstack([[0.0, 0.0], np.cumsum(e, axis=0)])[:-1]


def random_zonogon(rng, wild: bool = False) -> np.ndarray | None:
    """Hexagon with opposite sides parallel and equal; None if too thin."""
    if wild:
        phi = np.sort(rng.uniform(0.0, np.pi, 3))
        gaps = np.diff(np.concatenate([phi, [phi[0] + np.pi]]))
        if gaps.min() < 0.2:
            return None
        lengths = rng.uniform(0.1, 3.0, 3)
    else:
        phi = np.array([0.0, np.pi / 3, 2 * np.pi / 3]) + rng.uniform(-0.15, 0.15, 3)
        lengths = rng.uniform(0.8, 1.2, 3)
    e = np.stack([lengths * np.cos(phi), lengths * np.sin(phi)], axis=1)
    edges = np.vstack([e, -e])
    return np.vstack([[0.0, 0.0], np.cumsum(edges, axis=0)])[:-1]


@pytest.fixture(scope="session")
def square_polygon():
    return assign_heights(SQUARE, SQUARE_LABELS)


@pytest.fixture(scope="session")
def square_report(square_polygon):
    return solve_jumps(square_polygon.lifted_edges())


@pytest.fixture(scope="session")
def square_patch(square_polygon, square_report):
    data = boundary_data_from_vertices(square_polygon.lifted_vertices(),
                                       square_report.jump_points)
    return GraphPatch(data)


@pytest.fixture(scope="session")
def square_graph(square_patch, square_polygon):
    return GraphMap(square_patch, square_polygon.vertices)


@pytest.fixture(scope="session")
def hexagon_polygon():
    return assign_heights(regular_hexagon(), ("A", "B", "A", "B", "A", "B"))


@pytest.fixture(scope="session")
def hexagon_patch(hexagon_polygon):
    report = solve_jumps(hexagon_polygon.lifted_edges())
    assert report.converged
    data = boundary_data_from_vertices(hexagon_polygon.lifted_vertices(),
                                       report.jump_points)
    return GraphPatch(data)


@pytest.fixture(scope="session")
def hexagon_graph(hexagon_patch, hexagon_polygon):
    return GraphMap(hexagon_patch, hexagon_polygon.vertices)
