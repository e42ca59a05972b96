import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from pfcurv.embedding import (
    EmbeddedSurface, embed, hinge_angle_stats, hinge_angles_euclidean, read_off, write_off,
)
from pfcurv.errors import DegenerateHinge, MeshError

ICO_HINGE = math.pi - math.acos(-math.sqrt(5) / 3)


def test_icosahedron_hinges_negative(ico):
    phi = hinge_angles_euclidean(ico).values
    assert np.allclose(phi, -ICO_HINGE, atol=1e-12)


def test_flat_torus_hinges_zero(flat_torus, square_torus):
    for surf in (flat_torus, square_torus):
        assert np.allclose(hinge_angles_euclidean(surf).values, 0.0, atol=1e-14)


def test_flipped_orientation_changes_sign(modified6):
    e = modified6.embedded
    a = hinge_angles_euclidean(e).values
    b = hinge_angles_euclidean(e.flipped()).values
    assert np.allclose(a, -b, atol=1e-14)


def test_concave_fold_positive():
    # two triangles folded upward along the x-axis: concave toward +z
    P = np.array([[0, 0, 0], [1, 0, 0], [0.5, 1, 0.3], [0.5, -1, 0.3]], float)
    e = embed(P, [(0, 1, 2), (1, 0, 3)])
    phi = hinge_angles_euclidean(e).values
    hinge = e.surface.edge_id(0, 1)
    assert phi[hinge] == pytest.approx(2 * math.atan(0.3), abs=1e-12)
    assert np.isnan(np.delete(phi, hinge)).all()


def test_folded_flat_is_degenerate():
    P = np.array([[0, 0, 0], [1, 0, 0], [0.5, 1, 0], [0.5, 1.0, 1e-12]], float)
    e = embed(P, [(0, 1, 2), (1, 0, 3)])
    with pytest.raises(DegenerateHinge):
        hinge_angles_euclidean(e)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_rigid_motion_invariance(modified6, seed, shift):
    e = modified6.embedded
    R = Rotation.random(random_state=seed).as_matrix()
    a = hinge_angles_euclidean(e).values
    b = hinge_angles_euclidean(e.transformed(R, shift)).values
    assert np.allclose(a, b, atol=1e-10)


def test_periodic_rigid_invariance(cylinder):
    R = Rotation.from_euler("xyz", [0.3, -1.1, 2.0]).as_matrix()
    a = hinge_angles_euclidean(cylinder.embedded).values
    b = hinge_angles_euclidean(cylinder.embedded.transformed(R, [1.0, 2.0, 3.0])).values
    assert np.allclose(a, b, atol=1e-12)


def test_off_roundtrip(tmp_path, modified6):
    e = modified6.embedded
    path = tmp_path / "m.off"
    write_off(e, path)
    f = read_off(path)
    assert np.array_equal(f.positions, e.positions)
    assert np.array_equal(f.surface.triangles, e.surface.triangles)
    assert np.allclose(f.surface.lengths, e.surface.lengths, rtol=1e-15)


def test_periodic_off_refused(tmp_path, cylinder):
    with pytest.raises(MeshError):
        write_off(cylinder.embedded, tmp_path / "c.off")


def test_length_check():
    e = embed(np.eye(3), [(0, 1, 2)])
    with pytest.raises(MeshError):
        EmbeddedSurface(e.surface, 2 * np.eye(3))


def test_hinge_stats_degrees(ico):
    mean, mx = hinge_angle_stats(hinge_angles_euclidean(ico))
    assert mean == pytest.approx(math.degrees(ICO_HINGE))
    assert mx == pytest.approx(math.degrees(ICO_HINGE))
