import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfcurv.errors import UnknownSurface
from pfcurv.smooth import (
    GOWDY_A, GOWDY_B, directional_curvature, mean_curvature_smooth, smooth_path_integral,
    surface_sampler,
)


def _sphere_points(R, n=20, seed=0):
    u = np.random.default_rng(seed).normal(size=(n, 3))
    return R * u / np.linalg.norm(u, axis=1, keepdims=True)


def test_unknown_surface():
    with pytest.raises(UnknownSurface):
        surface_sampler("torus")


def test_round_sphere_radius_two():
    s = surface_sampler("round-sphere", radius=2.0)
    X = _sphere_points(2.0)
    assert np.allclose(s.mean_curvature(X), -0.5, atol=1e-8)
    assert np.allclose(s.principal_curvatures(X), -0.5, atol=1e-6)
    assert mean_curvature_smooth(s, X[0]) == pytest.approx(-0.5, abs=1e-8)


def test_cylinder_curvature():
    s = surface_sampler("cylinder", radius=2.0)
    X = s.point(np.linspace(0, 6, 7), np.linspace(-1, 1, 7))
    assert np.allclose(s.mean_curvature(X), -0.25, atol=1e-8)
    k = s.principal_curvatures(X)
    assert np.allclose(k[:, 0], -0.5, atol=1e-8)
    assert np.allclose(k[:, 1], 0.0, atol=1e-8)
    axial = np.tile([0, 0, 1.0], (7, 1))
    assert np.allclose(directional_curvature(s, X, axial), 0.0, atol=1e-8)


def test_polarization_matches_second_form():
    s = surface_sampler("peanut")
    rng = np.random.default_rng(4)
    X = s.project(rng.normal(size=(10, 3)))
    f = s.forms(X)
    n = f.normal
    for _ in range(3):
        u = rng.normal(size=(10, 3))
        v = rng.normal(size=(10, 3))
        u -= np.einsum("ni,ni->n", u, n)[:, None] * n
        v -= np.einsum("ni,ni->n", v, n)[:, None] * n
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        assert np.allclose(s.polarized_form(X, u, v), s.second_form(X, u, v), atol=1e-10)


def test_mean_is_basis_independent():
    s = surface_sampler("modified-sphere")
    X = s.project(np.random.default_rng(5).normal(size=(8, 3)))
    f = s.forms(X)
    n = f.normal
    ref = s.mean_curvature(X)
    for ang in (0.0, 0.4, 1.3):
        e1 = f.tangents[:, 0] / np.linalg.norm(f.tangents[:, 0], axis=1, keepdims=True)
        e2 = np.cross(n, e1)
        u = math.cos(ang) * e1 + math.sin(ang) * e2
        w = -math.sin(ang) * e1 + math.cos(ang) * e2
        avg = 0.5 * (s.directional_curvature(X, u) + s.directional_curvature(X, w))
        assert np.allclose(avg, ref, atol=1e-10)


def _modified_parametric_mean(theta, phi):
    """Mean curvature of the modified sphere from the classical
    graph-free formula with analytic spherical-angle derivatives."""
    import sympy as sp

    t, p = sp.symbols("t p")
    x, y, z = sp.sin(t) * sp.cos(p), sp.sin(t) * sp.sin(p), sp.cos(t)
    r = sp.sqrt((1 + sp.Rational(1, 4) * (1 - z ** 2)) * (1 + sp.Rational(1, 4) * x ** 2))
    X = sp.Matrix([r * x, r * y, r * z])
    Xt, Xp = X.diff(t), X.diff(p)
    Xtt, Xtp, Xpp = Xt.diff(t), Xt.diff(p), Xp.diff(p)
    N = Xt.cross(Xp)
    E, F, G = Xt.dot(Xt), Xt.dot(Xp), Xp.dot(Xp)
    nn = sp.sqrt(N.dot(N))
    L, M, Nn = Xtt.dot(N) / nn, Xtp.dot(N) / nn, Xpp.dot(N) / nn
    H = (E * Nn - 2 * F * M + G * L) / (2 * (E * G - F ** 2))
    f = sp.lambdify((t, p), H, "numpy")
    pt = sp.lambdify((t, p), list(X), "numpy")
    return f(theta, phi), np.array(pt(theta, phi), dtype=float).T


def test_modified_sphere_two_routes():
    theta = np.array([math.pi / 2, 0.4, 1.0, 1.6, 2.5])
    phi = np.array([0.0, 0.3, 2.0, 4.0, 5.5])
    H_ref, X = _modified_parametric_mean(theta, phi)
    s = surface_sampler("modified-sphere")
    # X_t x X_p points outward, which is also our orientation normal
    assert np.allclose(s.mean_curvature(X), H_ref, rtol=0, atol=1e-8)


def test_gowdy_plane_periodic_and_traced():
    s = surface_sampler("gowdy-plane")
    t = np.linspace(0, 6, 13)
    X = s.point(np.zeros_like(t), t)
    Xp = s.point(np.full_like(t, 2.5), t + 6.0)  # one z-period later, shifted in y
    assert np.allclose(s.mean_curvature(X), s.mean_curvature(Xp), atol=1e-12)
    k = s.principal_curvatures(X)
    assert np.allclose(k.sum(axis=1), 2 * s.mean_curvature(X), atol=1e-12)
    assert np.max(np.abs(s.mean_curvature(X))) > 1e-3


def test_gowdy_normal_is_unit_and_orthogonal():
    s = surface_sampler("gowdy-plane")
    X = s.point(np.zeros(9), np.linspace(0, 6, 9))
    n = s.normals(X)
    g = s.metric
    assert np.allclose(g.inner(X, n, n), 1.0, atol=1e-12)
    for v in (GOWDY_A, GOWDY_B):
        V = np.tile(v, (9, 1))
        assert np.allclose(g.inner(X, n, V), 0.0, atol=1e-12)
    assert np.all(n[:, 0] > 0)


def test_point_examples():
    s = surface_sampler("modified-sphere")
    # r^2 = (1 + (1 - z^2)/4)(1 + x^2/4) along the axes
    assert np.allclose(s.point(0.0, 0.0), [0, 0, 1])
    assert np.allclose(s.point(math.pi / 2, 0.0), [math.sqrt(1.25 * 1.25), 0, 0])
    p = surface_sampler("peanut")
    assert np.allclose(p.point(math.pi / 2, math.pi / 2), [0, math.sqrt(0.5), 0])


def test_path_integrals():
    sph = surface_sampler("round-sphere", radius=1.0)
    beta = 1.2
    ang = np.linspace(0, beta, 400)
    arc = np.column_stack([np.cos(ang), np.sin(ang), np.zeros_like(ang)])
    assert smooth_path_integral(sph, arc) == pytest.approx(-beta, rel=1e-5)
    cyl = surface_sampler("cylinder")
    line = np.column_stack([np.ones(50), np.zeros(50), np.linspace(0, 2, 50)])
    assert smooth_path_integral(cyl, line) == pytest.approx(0.0, abs=1e-10)
    quarter = np.linspace(0, math.pi / 2, 400)
    circ = np.column_stack([np.cos(quarter), np.sin(quarter), np.zeros_like(quarter)])
    assert cyl.path_integral(circ) == pytest.approx(-math.pi / 2, rel=1e-5)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 2.9), st.floats(0.0, 6.2))
def test_principal_bracket_directional(theta, phi):
    s = surface_sampler("peanut")
    X = s.point(theta, phi)[None]
    f = s.forms(X)
    k1, k2 = f.principal()[0]
    v = f.tangents[0, 0] + 0.3 * f.tangents[0, 1]
    k = s.directional_curvature(X, v[None])[0]
    assert k1 - 1e-9 <= k <= k2 + 1e-9


def test_area_statistics_round_sphere():
    s = surface_sampler("round-sphere", radius=1.0)
    area, mean_k = s.area_statistics(64)
    assert area == pytest.approx(4 * math.pi, rel=1e-9)
    assert mean_k == pytest.approx(1.0, rel=1e-6)


def test_geodesic_midpoint_on_sphere():
    s = surface_sampler("round-sphere", radius=1.0)
    P = np.array([[1.0, 0, 0]])
    Q = np.array([[0, 1.0, 0]])
    mid, tan = s.geodesic_midpoints(P, Q)
    assert np.allclose(mid[0], [math.sqrt(0.5), math.sqrt(0.5), 0], atol=1e-6)
    assert abs(tan[0] @ [1, -1, 0]) / math.sqrt(2) == pytest.approx(1.0, abs=1e-6)
