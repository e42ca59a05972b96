"""Smooth reference surfaces and their exact curvature.

Each surface is handled through local charts ``F(a, b)`` centred on a
surface point.  Fundamental forms come from chart derivatives (central
differences with one Richardson step unless the chart is linear), and the
second fundamental form uses the ambient covariant derivative, so the same
code covers Euclidean space and the Gowdy metric.

The unit normal is always the orientation normal of the matching mesh,
which makes smooth and discrete curvature signs agree: a sphere with
outward normal has negative curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .errors import UnknownSurface
from .metric import EuclideanMetric, GowdyMetric, PulledBackMetric, geodesic_paths

FD_STEP = 2e-3


@dataclass
class SurfaceForms:
    """Local differential geometry at a batch of surface points.

    ``tangents[..., 0, :]`` and ``tangents[..., 1, :]`` are the chart
    derivatives; ``first`` and ``second`` the fundamental forms in that
    basis; ``normal`` the g-unit orientation normal.
    """

    point: np.ndarray
    tangents: np.ndarray
    first: np.ndarray
    second: np.ndarray
    normal: np.ndarray

    def shape_operator(self):
        return np.linalg.solve(self.first, self.second)

    def mean(self):
        return 0.5 * np.trace(self.shape_operator(), axis1=-2, axis2=-1)

    def principal(self):
        """Principal curvatures, ascending, shape (..., 2)."""
        S = self.shape_operator()
        H = 0.5 * (S[..., 0, 0] + S[..., 1, 1])
        K = np.linalg.det(S)
        d = np.sqrt(np.maximum(H * H - K, 0.0))
        return np.stack([H - d, H + d], axis=-1)

    def coefficients(self, v):
        """Components of ambient tangent vectors ``v`` in the chart basis."""
        T = self.tangents  # (..., 2, 3)
        A = np.einsum("...ai,...bi->...ab", T, T)
        rhs = np.einsum("...ai,...i->...a", T, v)
        return np.linalg.solve(A, rhs[..., None])[..., 0]


class SmoothSurface:
    """A smooth surface in a 3-dimensional ambient chart.

    Subclasses implement :meth:`chart`, returning the local chart centred at
    ``x`` as a callable ``F(a, b)`` over arrays, and :meth:`orientation`,
    the sign that turns ``X_a x X_b`` into the orientation normal.
    """

    name = "surface"
    linear_chart = False

    def __init__(self, metric=None):
        self.metric = metric if metric is not None else EuclideanMetric()

    # -- charts --------------------------------------------------------

    def chart(self, x):
        raise NotImplementedError

    def orientation(self, x, n):
        raise NotImplementedError

    def project(self, X):
        """Map nearby ambient points onto the surface (Euclidean surfaces)."""
        raise NotImplementedError

    def derivatives(self, x, h=FD_STEP):
        """(X_a, X_b, X_aa, X_ab, X_bb) at points x, each shape (n, 3)."""
        F = self.chart(x)
        zero = np.zeros(len(x))

        def at(a, b):
            return F(zero + a, zero + b)

        def first(s):
            return (at(s, 0) - at(-s, 0)) / (2 * s), (at(0, s) - at(0, -s)) / (2 * s)

        def second(s):
            c = at(0, 0)
            aa = (at(s, 0) - 2 * c + at(-s, 0)) / s**2
            bb = (at(0, s) - 2 * c + at(0, -s)) / s**2
            ab = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s**2)
            return aa, ab, bb

        if self.linear_chart:
            Xa, Xb = first(1.0)
            z = np.zeros_like(Xa)
            return Xa, Xb, z, z, z
        f1, f2 = first(h), first(h / 2)
        s1, s2 = second(h), second(h / 2)
        d1 = [(4 * b - a) / 3 for a, b in zip(f1, f2)]
        d2 = [(4 * b - a) / 3 for a, b in zip(s1, s2)]
        return d1[0], d1[1], d2[0], d2[1], d2[2]

    def forms(self, x):
        """Fundamental forms at surface points ``x`` (shape (3,) or (n, 3))."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        Xa, Xb, Xaa, Xab, Xbb = self.derivatives(x)
        g = self.metric.tensor(x)
        G = self.metric.christoffel(x)
        T = np.stack([Xa, Xb], axis=1)
        first = np.einsum("nai,nij,nbj->nab", T, g, T)
        # normal: raise the covector X_a x X_b and normalize under g
        w = np.cross(Xa, Xb)
        n = np.einsum("nij,nj->ni", self.metric.inverse(x), w)
        n /= np.sqrt(np.einsum("ni,ni->n", n, w))[:, None]
        n *= self.orientation(x, n)[:, None]
        second = np.empty_like(first)
        for (a, b), Xd in (((0, 0), Xaa), ((0, 1), Xab), ((1, 1), Xbb)):
            acc = Xd + np.einsum("nijk,nj,nk->ni", G, T[:, a], T[:, b])
            second[:, a, b] = np.einsum("ni,nij,nj->n", acc, g, n)
        second[:, 1, 0] = second[:, 0, 1]
        out = SurfaceForms(x, T, first, second, n)
        if single:
            out = SurfaceForms(x[0], T[0], first[0], second[0], n[0])
        return out

    # -- curvature -----------------------------------------------------

    def second_form(self, x, u, v):
        """II(u, v) for ambient tangent vectors u, v at x."""
        f = self.forms(x)
        cu, cv = f.coefficients(np.asarray(u, float)), f.coefficients(np.asarray(v, float))
        return np.einsum("...a,...ab,...b->...", cu, f.second, cv)

    def directional_curvature(self, x, v):
        """Normal curvature ``II(v, v) / I(v, v)`` in tangent direction v."""
        f = self.forms(x)
        c = f.coefficients(np.asarray(v, float))
        num = np.einsum("...a,...ab,...b->...", c, f.second, c)
        den = np.einsum("...a,...ab,...b->...", c, f.first, c)
        return num / den

    def polarized_form(self, x, u, v):
        """Mixed value from three normal curvatures.

        ``alpha(u, v) = (k(u) + k(v) - |u - v|^2 k(u - v)) / 2`` for g-unit
        u and v, where k is the normal curvature.
        """
        w = np.asarray(u, float) - np.asarray(v, float)
        w2 = self.metric.inner(x, w, w)
        return 0.5 * (
            self.directional_curvature(x, u) + self.directional_curvature(x, v)
            - w2 * self.directional_curvature(x, w)
        )

    def mean_curvature(self, x):
        return self.forms(x).mean()

    def principal_curvatures(self, x):
        return self.forms(x).principal()

    def normals(self, x):
        return self.forms(x).normal

    # -- geodesics -----------------------------------------------------

    def geodesic_arcs(self, P, Q, segments=16, tol=1e-12, maxiter=50):
        """Surface geodesics between point pairs, as polylines (M, segments+1, 3).

        Discrete geodesics of the ambient chord energy ``sum |X_{i+1} - X_i|^2``
        with nodes constrained to the surface.  Each Gauss-Newton step moves
        the interior nodes within their tangent planes (one sparse
        block-tridiagonal solve) and projects them back.
        """
        P = np.atleast_2d(np.asarray(P, float))
        Q = np.atleast_2d(np.asarray(Q, float))
        t = np.linspace(0.0, 1.0, segments + 1)[None, :, None]
        path = self.project(P[:, None] + t * (Q - P)[:, None])
        path[:, 0], path[:, -1] = P, Q
        M, n = len(P), segments - 1
        if n < 1:
            return path
        for _ in range(maxiter):
            X = path[:, 1:-1]
            nrm = self.surface_normals(X)
            e1, e2 = _frame(nrm.reshape(-1, 3))
            T = np.stack([e1, e2], axis=-1).reshape(M, n, 3, 2)
            resid = 2 * X - path[:, :-2] - path[:, 2:]
            rhs = -np.einsum("mnia,mni->mna", T, resid)
            step = _tangent_solve(T, rhs)
            move = np.einsum("mnia,mna->mni", T, step)
            path[:, 1:-1] = self.project(X + move)
            if np.max(np.abs(move)) < tol:
                break
        return path

    def surface_normals(self, X):
        """Unit normals at many points (any leading shape)."""
        shp = X.shape
        n = self.normals(X.reshape(-1, 3))
        return n.reshape(shp)

    def geodesic_midpoints(self, P, Q, segments=16):
        """Arclength midpoints of surface geodesics and the unit tangent there.

        Returns
        -------
        (midpoints, tangents) : ndarrays of shape (M, 3)
        """
        path = self.geodesic_arcs(P, Q, segments)
        mids, tans = _arc_midpoint(path, self.metric)
        mids = self.project(mids)
        nrm = self.surface_normals(mids)
        tans -= np.einsum("ni,ni->n", tans, nrm)[:, None] * nrm
        tans /= np.linalg.norm(tans, axis=1, keepdims=True)
        return mids, tans

    def crossing_direction(self, x, t):
        """Unit tangent g-orthogonal to tangent t, at points x."""
        n = self.surface_normals(np.atleast_2d(x))
        w = np.cross(n, np.atleast_2d(t))
        return w / np.linalg.norm(w, axis=1, keepdims=True)

    def path_integral(self, arc):
        """Integral of the normal curvature along and tangent to a polyline arc."""
        return smooth_path_integral(self, arc)


def _tangent_solve(T, rhs):
    """Solve the block-tridiagonal tangent system of :meth:`geodesic_arcs`.

    Block row i reads ``2 c_i - T_i' T_{i-1} c_{i-1} - T_i' T_{i+1} c_{i+1}
    = rhs_i`` with orthonormal 3x2 tangent bases T_i.
    """
    M, n = T.shape[:2]
    idx = (np.arange(M)[:, None] * n + np.arange(n)[None, :]) * 2
    a = np.arange(2)
    rows = [np.broadcast_to(idx[..., None] + a, (M, n, 2)).ravel()]
    cols = [rows[0]]
    vals = [np.full(M * n * 2, 2.0)]
    if n > 1:
        C = -np.einsum("mnia,mnib->mnab", T[:, :-1], T[:, 1:])  # row i, column i+1
        r = idx[:, :-1, None, None] + a[:, None]
        c = idx[:, 1:, None, None] + a[None, :]
        for rr, cc, vv in ((r, c, C), (np.swapaxes(c, -1, -2), np.swapaxes(r, -1, -2), np.swapaxes(C, -1, -2))):
            rows.append(np.broadcast_to(rr, C.shape).ravel())
            cols.append(np.broadcast_to(cc, C.shape).ravel())
            vals.append(vv.ravel())
    size = M * n * 2
    A = sparse.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size))
    return spsolve(A, rhs.ravel()).reshape(M, n, 2)


def _arc_midpoint(path, metric):
    D = np.diff(path, axis=1)
    m = 0.5 * (path[:, 1:] + path[:, :-1])
    seg = np.sqrt(metric.inner(m, D, D))
    cum = np.concatenate([np.zeros((len(path), 1)), np.cumsum(seg, axis=1)], axis=1)
    half = 0.5 * cum[:, -1]
    j = np.array([np.searchsorted(c, h) - 1 for c, h in zip(cum, half)])
    j = np.clip(j, 0, path.shape[1] - 2)
    r = np.arange(len(path))
    w = ((half - cum[r, j]) / seg[r, j])[:, None]
    mids = (1 - w) * path[r, j] + w * path[r, j + 1]
    return mids, D[r, j] / np.linalg.norm(D[r, j], axis=1, keepdims=True)


def smooth_path_integral(surface, arc):
    """Midpoint-rule ``int kappa(T) ds`` over a polyline lying on ``surface``."""
    arc = np.asarray(arc, dtype=float)
    D = np.diff(arc, axis=0)
    m = surface.project(0.5 * (arc[1:] + arc[:-1])) if not surface.linear_chart else 0.5 * (arc[1:] + arc[:-1])
    ds = np.sqrt(surface.metric.inner(m, D, D))
    k = surface.directional_curvature(m, D)
    return float(np.sum(k * ds))


# -- concrete surfaces -------------------------------------------------


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _frame(d):
    """Two unit vectors orthogonal to each row of d."""
    ref = np.where(np.abs(d[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    e1 = _unit(np.cross(ref, d))
    e2 = np.cross(d, e1)
    return e1, e2


class RadialSurface(SmoothSurface):
    """Star-shaped surface ``r(u) u`` over unit directions u."""

    def __init__(self, radius_fn, name):
        super().__init__(EuclideanMetric())
        self._r = radius_fn
        self.name = name
        self._stats = {}

    def radius(self, u):
        return self._r(np.asarray(u, dtype=float))

    def point(self, theta, phi):
        """Surface point in spherical-polar parameters."""
        theta, phi = np.asarray(theta, float), np.asarray(phi, float)
        u = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
        return self.radius(u)[..., None] * u

    def chart(self, x):
        d0 = _unit(np.atleast_2d(x))
        e1, e2 = _frame(d0)

        def F(a, b):
            u = _unit(d0 + a[:, None] * e1 + b[:, None] * e2)
            return self.radius(u)[:, None] * u

        return F

    def orientation(self, x, n):
        return np.sign(np.einsum("ni,ni->n", n, x))

    def project(self, X):
        u = _unit(np.asarray(X, float))
        return self.radius(u)[..., None] * u

    def area_statistics(self, n=200):
        """Total area and area-weighted mean |principal curvature|.

        Gauss-Legendre in the polar angle, midpoint rule (spectral for
        periodic integrands) in azimuth.
        """
        key = int(n)
        if key in self._stats:
            return self._stats[key]
        x, w = np.polynomial.legendre.leggauss(n)
        theta = 0.5 * math.pi * (x + 1)
        wt = 0.5 * math.pi * w
        phi = (np.arange(2 * n) + 0.5) * (math.pi / n)
        T, P = (a.ravel() for a in np.meshgrid(theta, phi, indexing="ij"))
        W = np.repeat(wt, 2 * n) * (math.pi / n)
        h = 1e-6
        Xt = (self.point(T + h, P) - self.point(T - h, P)) / (2 * h)
        Xp = (self.point(T, P + h) - self.point(T, P - h)) / (2 * h)
        dA = np.linalg.norm(np.cross(Xt, Xp), axis=1) * W
        k = np.abs(self.principal_curvatures(self.point(T, P))).mean(axis=1)
        out = float(dA.sum()), float((k * dA).sum() / dA.sum())
        self._stats[key] = out
        return out


def _r_modified(u):
    x, z = u[..., 0], u[..., 2]
    return np.sqrt((1 + 0.25 * (1 - z * z)) * (1 + 0.25 * x * x))


def _r_peanut(u):
    x, z = u[..., 0], u[..., 2]
    return np.sqrt((0.5 + z * z) * (1 + 0.25 * x * x))


class Cylinder(SmoothSurface):
    """Circular cylinder of radius R about the z-axis, normal outward."""

    name = "cylinder"

    def __init__(self, radius=1.0):
        super().__init__(EuclideanMetric())
        self.radius = float(radius)

    def point(self, phi, z):
        phi, z = np.asarray(phi, float), np.asarray(z, float)
        return np.stack([self.radius * np.cos(phi), self.radius * np.sin(phi), z], axis=-1)

    def chart(self, x):
        x = np.atleast_2d(x)
        R = self.radius
        phi0 = np.arctan2(x[:, 1], x[:, 0])
        z0 = x[:, 2]

        def F(a, b):
            ang = phi0 + a / R
            return np.stack([R * np.cos(ang), R * np.sin(ang), z0 + b], axis=1)

        return F

    def orientation(self, x, n):
        return np.sign(n[:, 0] * x[:, 0] + n[:, 1] * x[:, 1])

    def project(self, X):
        X = np.array(X, dtype=float)
        rho = np.linalg.norm(X[..., :2], axis=-1, keepdims=True)
        X[..., :2] *= self.radius / rho
        return X


# tangent vectors spanning the tilted plane in the Gowdy chart
GOWDY_A = np.array([0.0, 1.0, 0.0])
GOWDY_B = np.array([-1.0, 0.0, math.pi]) / 3.0


class GowdyPlane(SmoothSurface):
    """The plane ``s A + t B`` in the Gowdy metric, positive side toward +x."""

    name = "gowdy-plane"
    linear_chart = True

    def __init__(self, amp=0.1):
        super().__init__(GowdyMetric(amp))
        self.basis = np.array([GOWDY_A, GOWDY_B])
        self.plane_metric = PulledBackMetric(self.metric, self.basis)

    def point(self, s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        return s[..., None] * GOWDY_A + t[..., None] * GOWDY_B

    def parameters(self, X):
        """Plane coordinates (s, t) of chart points on the plane."""
        X = np.asarray(X, float)
        t = X[..., 2] / GOWDY_B[2]
        s = X[..., 1] - t * GOWDY_B[1]
        return np.stack([s, t], axis=-1)

    def chart(self, x):
        x = np.atleast_2d(x)

        def F(a, b):
            return x + a[:, None] * GOWDY_A + b[:, None] * GOWDY_B

        return F

    def orientation(self, x, n):
        return np.sign(n[:, 0])

    def project(self, X):
        return self.point(*np.moveaxis(self.parameters(X), -1, 0))

    def normals(self, x):
        return self.forms(np.atleast_2d(x)).normal

    def geodesic_arcs(self, P, Q, segments=64, **_):
        """Geodesics of the induced plane metric, solved in (s, t)."""
        p = self.parameters(np.atleast_2d(P))
        q = self.parameters(np.atleast_2d(Q))
        path = geodesic_paths(self.plane_metric, p, q, segments)
        return self.point(path[..., 0], path[..., 1])

    def geodesic_midpoints(self, P, Q, segments=64):
        path = self.geodesic_arcs(P, Q, segments)
        mids, tans = _arc_midpoint(path, self.metric)
        return mids, tans

    def crossing_direction(self, x, t):
        """In-plane direction g-orthogonal to t."""
        x = np.atleast_2d(x)
        t = np.atleast_2d(t)
        f = self.forms(x)
        c = f.coefficients(t)
        Gc = np.einsum("nab,nb->na", f.first, c)
        w = np.stack([-Gc[:, 1], Gc[:, 0]], axis=1)
        W = np.einsum("na,nai->ni", w, f.tangents)
        return W / np.sqrt(self.metric.inner(x, W, W))[:, None]


SURFACES = ("modified-sphere", "peanut", "round-sphere", "cylinder", "gowdy-plane")


def surface_sampler(name, **params):
    """Smooth surface by name.

    ``round-sphere`` and ``cylinder`` take ``radius``; ``gowdy-plane``
    takes ``amp``.

    Raises
    ------
    UnknownSurface
    """
    if name == "modified-sphere":
        return RadialSurface(_r_modified, name)
    if name == "peanut":
        return RadialSurface(_r_peanut, name)
    if name == "round-sphere":
        R = float(params.get("radius", 1.0))
        return RadialSurface(lambda u: np.full(u.shape[:-1], R), name)
    if name == "cylinder":
        return Cylinder(params.get("radius", 1.0))
    if name == "gowdy-plane":
        return GowdyPlane(params.get("amp", 0.1))
    raise UnknownSurface(name)


def directional_curvature(surface, point, tangent):
    return surface.directional_curvature(point, tangent)


def mean_curvature_smooth(surface, point):
    return surface.mean_curvature(point)
