import json

import numpy as np
import pytest

from brionlab import load_polytope, plane_from_vectors

CUBE_VERTICES = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]
PYRAMID_VERTICES = [
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [1.0, 1.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.5, 0.5, 1.0],
]


@pytest.fixture(scope="session")
def square():
    return load_polytope({"dim": 2, "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})


@pytest.fixture(scope="session")
def triangle():
    # seeded irregular triangle reused across identity checks
    verts = np.random.default_rng(7).uniform(-1.5, 1.5, (3, 2))
    return load_polytope({"dim": 2, "vertices": verts.tolist()})


@pytest.fixture(scope="session")
def cube():
    return load_polytope({"dim": 3, "vertices": CUBE_VERTICES})


@pytest.fixture(scope="session")
def pyramid():
    return load_polytope({"dim": 3, "vertices": PYRAMID_VERTICES})


@pytest.fixture(scope="session")
def plane2():
    return plane_from_vectors([1.0, 0.0], [0.0, 1.0])


@pytest.fixture(scope="session")
def cube_plane():
    # generic: no cube edge is orthogonal to this plane
    return plane_from_vectors([1.0, 0.3, 0.2], [-0.1, 1.0, 0.4])


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(
        json.dumps({"dim": 2, "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    )
    return path


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.json"
    path.write_text(json.dumps({"dim": 3, "vertices": CUBE_VERTICES}))
    return path
