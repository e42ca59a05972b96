import math

import numpy as np
import pytest

from pfcurv.embedding import hinge_angles_euclidean
from pfcurv.errors import UnknownSurface, UnsupportedLayerCount
from pfcurv.generators import (
    LAYER_COUNTS, generate_cylinder_grid, generate_gowdy_grids, generate_layered_surface,
    layered_scheme,
)
from pfcurv.layers import layered_hinge_angles

COUNTS = {6: (50, 144, 96), 10: (128, 378, 252), 14: (242, 720, 480),
          18: (392, 1170, 780), 22: (578, 1728, 1152)}


@pytest.mark.parametrize("L", LAYER_COUNTS)
def test_counts(L):
    s = generate_layered_surface("peanut", L).surface
    assert (s.n_vertices, s.n_edges, s.n_triangles) == COUNTS[L]
    assert s.euler_characteristic == 2
    assert layered_scheme(L).n_vertices == (3 * L + 2) ** 2 // 8


@pytest.mark.parametrize("L", [2, 5, 7, 8, 12, 6.0])
def test_bad_layer_counts(L):
    with pytest.raises(UnsupportedLayerCount):
        layered_scheme(L)


def test_unknown_surface():
    with pytest.raises(UnknownSurface):
        generate_layered_surface("klein-bottle", 6)


def test_deterministic():
    a = generate_layered_surface("modified-sphere", 10)
    b = generate_layered_surface("modified-sphere", 10)
    assert np.array_equal(a.embedded.positions, b.embedded.positions)
    assert np.array_equal(a.surface.triangles, b.surface.triangles)


def test_vertices_on_surface():
    m = generate_layered_surface("peanut", 10)
    assert np.allclose(m.smooth.project(m.embedded.positions), m.embedded.positions, atol=1e-14)


def test_outward_orientation():
    m = generate_layered_surface("modified-sphere", 14)
    n = m.embedded.triangle_normals()
    c = m.embedded.triangle_points().mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", n, c) > 0)


def test_round_sphere_first_ring_symmetric():
    m = generate_layered_surface("round-sphere", 10)
    phi = hinge_angles_euclidean(m.embedded).values
    s = m.surface
    spokes = [s.edge_id(0, v) for v in range(1, 7)]
    assert np.allclose(phi[spokes], phi[spokes[0]], atol=1e-13)


def test_cylinder_grid_counts(cylinder):
    s = cylinder.surface
    assert (s.n_vertices, s.n_triangles) == (24 * 8, 2 * 24 * 8)
    assert s.euler_characteristic == 0
    assert s.boundary_edges == []
    open_grid = generate_cylinder_grid(12, 4, periodic=False)
    assert len(open_grid.surface.boundary_edges) == 24


@pytest.mark.parametrize("kind", ["rect", "rectangular", "skew"])
def test_gowdy_grid_topology(kind):
    g = generate_gowdy_grids(kind, 6)
    s = g.surface
    assert s.euler_characteristic == 0
    assert s.n_triangles == 2 * 6 * g.columns
    assert sorted(set(g.edge_type)) == ["a", "b", "c"]
    assert g.dual_kind == ("barycentric" if g.kind == "rect" else "voronoi")


def test_gowdy_unknown_kind():
    with pytest.raises(ValueError):
        generate_gowdy_grids("hexagonal", 6)


def test_gowdy_flat_without_wave():
    g = generate_gowdy_grids("skew", 6, amp=0.0)
    phi = layered_hinge_angles(g.smooth.metric, g.sampling, cache=g.cache).values
    assert np.allclose(phi, 0.0, atol=1e-10)


def _edge_values_by_type(grid, values):
    """Map (type, z of geodesic midpoint rounded) -> value."""
    out = {}
    z = 0.5 * (grid.edge_ends[:, 0, 2] + grid.edge_ends[:, 1, 2]) % (2 * math.pi)
    for e, (t, zz) in enumerate(zip(grid.edge_type, z)):
        out.setdefault((t, round(zz, 6)), []).append(values[e])
    return out


def test_gowdy_homogeneous_along_rows():
    g = generate_gowdy_grids("rect", 12)
    phi = layered_hinge_angles(g.smooth.metric, g.sampling, cache=g.cache).values
    for vals in _edge_values_by_type(g, phi).values():
        assert np.ptp(vals) < 1e-12


def test_gowdy_columns_do_not_matter():
    g4 = generate_gowdy_grids("skew", 6, columns=4)
    g8 = generate_gowdy_grids("skew", 6, columns=8)
    a = _edge_values_by_type(g4, g4.surface.lengths)
    b = _edge_values_by_type(g8, g8.surface.lengths)
    assert a.keys() == b.keys()
    for k in a:
        assert np.mean(a[k]) == pytest.approx(np.mean(b[k]), rel=1e-12)
    pa = layered_hinge_angles(g4.smooth.metric, g4.sampling, cache=g4.cache).values
    pb = layered_hinge_angles(g8.smooth.metric, g8.sampling, cache=g8.cache).values
    ha, hb = _edge_values_by_type(g4, pa), _edge_values_by_type(g8, pb)
    for k in ha:
        assert np.mean(ha[k]) == pytest.approx(np.mean(hb[k]), abs=1e-12)
