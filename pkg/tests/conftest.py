import numpy as np
import pytest
from scipy.spatial import ConvexHull

from pfcurv.embedding import embed
from pfcurv.generators import _orient_outward, generate_cylinder_grid, generate_layered_surface

GOLDEN = (1 + np.sqrt(5)) / 2


def icosahedron(circumradius=1.0):
    pts = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            pts += [(0, s1, s2 * GOLDEN), (s1, s2 * GOLDEN, 0), (s2 * GOLDEN, 0, s1)]
    pts = np.array(pts, dtype=float)
    pts *= circumradius / np.linalg.norm(pts[0])
    tris = _orient_outward(pts, ConvexHull(pts).simplices.astype(np.int64))
    return embed(pts, tris)


def periodic_plane(n=4, a=(1.0, 0.0), b=(0.5, np.sqrt(3) / 2)):
    """Flat torus: an n x n lattice grid in the z=0 plane, wrapped by lifts."""
    a = np.array([*a, 0.0])
    b = np.array([*b, 0.0])
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    pos = ii.ravel()[:, None] * a + jj.ravel()[:, None] * b

    def vid(i, j):
        return (i % n) * n + (j % n)

    def lift(i, j):
        return (i // n) * n * a + (j // n) * n * b

    tris, lifts = [], []
    for i in range(n):
        for j in range(n):
            # split along the short diagonal so the b = 60 degree lattice stays acute
            for cell in (((i, j), (i + 1, j), (i, j + 1)), ((i + 1, j), (i + 1, j + 1), (i, j + 1))):
                tris.append([vid(*p) for p in cell])
                lifts.append([lift(*p) for p in cell])
    return embed(pos, np.array(tris), np.array(lifts))


@pytest.fixture(scope="session")
def ico():
    return icosahedron()


@pytest.fixture(scope="session")
def flat_torus():
    return periodic_plane()


@pytest.fixture(scope="session")
def square_torus():
    return periodic_plane(4, (1.0, 0.0), (0.0, 1.0))


@pytest.fixture(scope="session")
def modified6():
    return generate_layered_surface("modified-sphere", 6)


@pytest.fixture(scope="session")
def modified10():
    return generate_layered_surface("modified-sphere", 10)


@pytest.fixture(scope="session")
def cylinder():
    return generate_cylinder_grid(n_around=24, n_rows=8, radius=1.0)
