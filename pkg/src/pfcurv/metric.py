"""Riemannian ambient metrics and their geodesics.

Metrics are evaluated in a single global chart.  Geodesic distances come
from minimizing a discretized path energy, batched over many endpoint
pairs; geodesic initial-value problems are integrated with an adaptive
Runge-Kutta method.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy import sparse
from scipy.sparse.linalg import splu

from .errors import NoConvergence, StepFailure

TWO_PI = 2.0 * math.pi


class AmbientMetric:
    """Base class for a metric ``g_ij(x)`` on a chart of dimension ``dim``.

    Subclasses provide :meth:`tensor` and :meth:`derivative`; Christoffel
    symbols follow from those unless overridden.
    """

    name = "metric"
    dim = 3
    is_flat = False

    def tensor(self, x):
        """Metric components, shape (..., dim, dim)."""
        raise NotImplementedError

    def derivative(self, x):
        """Partial derivatives ``d g_ij / d x^k``, shape (..., dim, dim, dim)."""
        raise NotImplementedError

    def inverse(self, x):
        return np.linalg.inv(self.tensor(x))

    def christoffel(self, x):
        """``Gamma^i_jk``, shape (..., dim, dim, dim), index order (i, j, k)."""
        dg = self.derivative(x)  # [..., l, j, k] = d_k g_lj
        # Gamma_ljk = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk)
        low = 0.5 * (
            np.swapaxes(dg, -1, -2)
            + dg
            - np.moveaxis(dg, -1, -3)
        )
        return np.einsum("...il,...ljk->...ijk", self.inverse(x), low)

    def inner(self, x, u, v):
        return np.einsum("...i,...ij,...j->...", u, self.tensor(x), v)

    def norm(self, x, v):
        return np.sqrt(self.inner(x, v, v))

    def canonical(self, x):
        """Split a point into (isometric shift, hashable key).

        Points with equal keys are related by the translation ``shift``,
        which is an isometry; geodesic data computed at the key point can be
        reused.  The default has no symmetry.
        """
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x), tuple(np.round(x, 12).tolist())


class EuclideanMetric(AmbientMetric):
    name = "euclidean"
    is_flat = True

    def __init__(self, dim=3):
        self.dim = dim

    def tensor(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.eye(self.dim), x.shape[:-1] + (self.dim, self.dim)).copy()

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape[:-1] + (self.dim,) * 3)

    def christoffel(self, x):
        return self.derivative(x)

    def canonical(self, x):
        x = np.asarray(x, dtype=float)
        return x.copy(), ()


class GowdyMetric(AmbientMetric):
    """``exp(A sin z) dx^2 + exp(-A sin z) dy^2 + dz^2``.

    Homogeneous in x and y and 2 pi periodic in z.
    """

    name = "gowdy"

    def __init__(self, amp=0.1):
        self.amp = float(amp)

    def _parts(self, x):
        z = np.asarray(x, dtype=float)[..., 2]
        s = self.amp * np.sin(z)
        c = self.amp * np.cos(z)
        return np.exp(s), np.exp(-s), c

    def tensor(self, x):
        ep, em, _ = self._parts(x)
        g = np.zeros(np.shape(ep) + (3, 3))
        g[..., 0, 0] = ep
        g[..., 1, 1] = em
        g[..., 2, 2] = 1.0
        return g

    def inverse(self, x):
        ep, em, _ = self._parts(x)
        g = np.zeros(np.shape(ep) + (3, 3))
        g[..., 0, 0] = 1.0 / ep
        g[..., 1, 1] = 1.0 / em
        g[..., 2, 2] = 1.0
        return g

    def derivative(self, x):
        ep, em, c = self._parts(x)
        d = np.zeros(np.shape(ep) + (3, 3, 3))
        d[..., 0, 0, 2] = c * ep
        d[..., 1, 1, 2] = -c * em
        return d

    def christoffel(self, x):
        ep, em, c = self._parts(x)
        G = np.zeros(np.shape(ep) + (3, 3, 3))
        G[..., 2, 0, 0] = -0.5 * c * ep
        G[..., 2, 1, 1] = 0.5 * c * em
        G[..., 0, 0, 2] = G[..., 0, 2, 0] = 0.5 * c
        G[..., 1, 1, 2] = G[..., 1, 2, 1] = -0.5 * c
        return G

    def canonical(self, x):
        x = np.asarray(x, dtype=float)
        turns = np.floor(x[2] / TWO_PI)
        zr = x[2] - TWO_PI * turns
        shift = np.array([x[0], x[1], TWO_PI * turns])
        key = int(round(zr * 1e9)) % int(round(TWO_PI * 1e9))
        return shift, (key,)


class PulledBackMetric(AmbientMetric):
    """Metric induced on the affine subspace ``x = origin + p @ basis``.

    ``basis`` has shape (k, dim); the result is a k-dimensional metric.
    """

    def __init__(self, ambient, basis, origin=None):
        self.ambient = ambient
        self.basis = np.asarray(basis, dtype=float)
        self.dim = self.basis.shape[0]
        self.origin = np.zeros(self.basis.shape[1]) if origin is None else np.asarray(origin, float)
        self.name = f"{ambient.name}-pullback"

    def to_ambient(self, p):
        return self.origin + np.asarray(p, dtype=float) @ self.basis

    def tensor(self, p):
        g = self.ambient.tensor(self.to_ambient(p))
        return np.einsum("ai,...ij,bj->...ab", self.basis, g, self.basis)

    def derivative(self, p):
        dg = self.ambient.derivative(self.to_ambient(p))  # [..., i, j, m]
        return np.einsum("ai,...ijm,bj,cm->...abc", self.basis, dg, self.basis, self.basis)


METRICS = {"euclidean": EuclideanMetric, "gowdy": GowdyMetric}


def metric_by_name(name, **params):
    try:
        cls = METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; expected one of {sorted(METRICS)}") from None
    return cls(**params)


# -- initial-value problem ---------------------------------------------


def geodesic_shoot(metric, point, direction, arclength, rtol=1e-12, atol=1e-14):
    """Follow the geodesic from ``point`` with initial ``direction``.

    The direction is normalized to unit speed under the metric, so the
    returned endpoint lies at geodesic distance ``arclength``.

    Raises
    ------
    StepFailure
        If the integrator cannot reach ``arclength``.
    """
    x0 = np.asarray(point, dtype=float)
    v0 = np.asarray(direction, dtype=float)
    speed = float(metric.norm(x0, v0))
    if not speed > 0:
        raise ValueError("direction must be nonzero")
    if arclength == 0:
        return x0.copy()
    d = metric.dim

    def rhs(_, y):
        x, v = y[:d], y[d:]
        G = metric.christoffel(x)
        return np.concatenate([v, -np.einsum("ijk,j,k->i", G, v, v)])

    sol = solve_ivp(
        rhs, (0.0, float(arclength)), np.concatenate([x0, v0 / speed]),
        method="DOP853", rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise StepFailure(sol.message)
    return sol.y[:d, -1]


# -- boundary-value problem --------------------------------------------


def _path_energy(metric, X, P, Q):
    """Discrete energy and gradient for a batch of polylines.

    X holds the interior nodes, shape (M, N-1, d); P, Q the fixed ends.
    The energy of one path is ``N * sum_s g(m_s)[D_s, D_s]`` with
    ``D_s`` the segment vectors and ``m_s`` the segment midpoints.
    """
    full = np.concatenate([P[:, None], X, Q[:, None]], axis=1)
    D = np.diff(full, axis=1)
    m = 0.5 * (full[:, 1:] + full[:, :-1])
    g = metric.tensor(m)
    dg = metric.derivative(m)
    gD = np.einsum("...ij,...j->...i", g, D)
    N = D.shape[1]
    E = N * np.einsum("...i,...i->...", gD, D)
    dq = np.einsum("...ijk,...i,...j->...k", dg, D, D)  # d/dm of g(m)[D, D]
    # segment s depends on node s (minus) and node s+1 (plus)
    grad_plus = N * (2.0 * gD + 0.5 * dq)
    grad_minus = N * (-2.0 * gD + 0.5 * dq)
    grad = grad_plus[:, :-1] + grad_minus[:, 1:]
    return E, grad


def _polyline_length(metric, full):
    D = np.diff(full, axis=1)
    m = 0.5 * (full[:, 1:] + full[:, :-1])
    return np.sum(np.sqrt(metric.inner(m, D, D)), axis=1)


def _resample(full, n):
    """Linearly resample polylines (M, K+1, d) to n segments by node index."""
    K = full.shape[1] - 1
    s = np.linspace(0.0, K, n + 1)
    i = np.minimum(np.floor(s).astype(int), K - 1)
    w = (s - i)[None, :, None]
    return (1 - w) * full[:, i] + w * full[:, i + 1]


def _stiffness(metric, full):
    """Sparse block-tridiagonal approximation of the energy Hessian.

    Keeps only the ``2 N g`` terms; the neglected metric-derivative terms
    are small relative to the segment scale, so a fixed-point iteration
    with this matrix converges quickly.
    """
    M, K1, d = full.shape
    N = K1 - 1
    n = N - 1
    g = metric.tensor(0.5 * (full[:, 1:] + full[:, :-1]))  # (M, N, d, d)
    diag = 2.0 * N * (g[:, :-1] + g[:, 1:])  # interior node i touches segments i, i+1
    off = -2.0 * N * g[:, 1:-1]  # couples interior i and i+1 via segment i+1
    node = (np.arange(M)[:, None] * n + np.arange(n)[None, :]) * d  # first dof of each node
    a = np.arange(d)
    rows, cols, vals = [], [], []
    r = node[..., None, None] + a[:, None]
    c = node[..., None, None] + a[None, :]
    rows.append(np.broadcast_to(r, diag.shape).ravel())
    cols.append(np.broadcast_to(c, diag.shape).ravel())
    vals.append(diag.ravel())
    if n > 1:
        r1 = node[:, :-1, None, None] + a[:, None]
        c1 = node[:, 1:, None, None] + a[None, :]
        for rr, cc in ((r1, c1), (c1, r1)):
            rows.append(np.broadcast_to(rr, off.shape).ravel())
            cols.append(np.broadcast_to(cc, off.shape).ravel())
            vals.append(off.ravel())
    size = M * n * d
    A = sparse.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    )
    return splu(A)


def geodesic_paths(metric, P, Q, segments=64, seed=None, tol=1e-14, maxiter=100):
    """Minimize the discrete path energy between each pair (P[i], Q[i]).

    Uses a fixed-point iteration preconditioned by the block-tridiagonal
    stiffness matrix of the seed path.  Returns the polylines, shape
    (M, segments + 1, dim).

    Raises
    ------
    NoConvergence
        If the node updates do not fall below ``tol`` (relative to the
        endpoint separation) within ``maxiter`` iterations.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    M, d = P.shape
    if seed is None:
        t = np.linspace(0.0, 1.0, segments + 1)[None, :, None]
        full = P[:, None] + t * (Q - P)[:, None]
    else:
        full = _resample(np.asarray(seed, dtype=float), segments)
    if segments < 2:
        return full
    scale = 1.0 + np.linalg.norm(Q - P, axis=1)
    lu = _stiffness(metric, full)
    X = full[:, 1:-1].copy()
    for it in range(maxiter):
        _, grad = _path_energy(metric, X, P, Q)
        step = lu.solve(grad.ravel()).reshape(X.shape)
        X -= step
        errs = np.abs(step).reshape(M, -1).max(axis=1) / scale
        if errs.max() <= tol:
            break
    else:
        worst = int(np.argmax(errs))
        raise NoConvergence(
            f"geodesic solve for pair {worst} ({P[worst]} -> {Q[worst]}): "
            f"last update {errs[worst]:.3g} after {maxiter} iterations"
        )
    full[:, 1:-1] = X
    return full


def geodesic_distances(metric, P, Q, segments=64, return_paths=False):
    """Batched geodesic distances, Richardson-extrapolated over N/2 and N.

    The midpoint-rule length of the minimizing polyline has an O(1/N^2)
    error; combining the N/2- and N-segment values removes it.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    fine = geodesic_paths(metric, P, Q, segments)
    coarse = geodesic_paths(metric, P, Q, segments // 2, seed=fine[:, ::2])
    Lf = _polyline_length(metric, fine)
    Lc = _polyline_length(metric, coarse)
    L = (4.0 * Lf - Lc) / 3.0
    return (L, fine) if return_paths else L


def geodesic_distance(metric, p, q, segments=64):
    """Length of the minimizing geodesic from ``p`` to ``q``."""
    return float(geodesic_distances(metric, [p], [q], segments)[0])


class GeodesicCache:
    """Memoized distances and geodesic shots exploiting metric isometries.

    Requests are reduced with :meth:`AmbientMetric.canonical`, so on a
    homogeneous metric each distinct configuration is solved only once.
    """

    def __init__(self, metric, segments=64):
        self.metric = metric
        self.segments = segments
        self._dist = {}
        self._shot = {}

    def _dkey(self, p, q):
        shift, key = self.metric.canonical(p)
        return key, tuple(np.round(q - p, 12).tolist()), p - shift

    def distances(self, P, Q):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        keys = []
        todo = {}
        for p, q in zip(P, Q):
            key, delta, base = self._dkey(p, q)
            k = (key, delta)
            keys.append(k)
            if k not in self._dist and k not in todo:
                todo[k] = (base, base + (q - p))
        if todo:
            items = list(todo.items())
            A = np.array([v[0] for _, v in items])
            B = np.array([v[1] for _, v in items])
            L = geodesic_distances(self.metric, A, B, self.segments)
            for (k, _), val in zip(items, L):
                self._dist[k] = float(val)
        return np.array([self._dist[k] for k in keys])

    def shoot(self, point, direction, arclength):
        p = np.asarray(point, dtype=float)
        shift, key = self.metric.canonical(p)
        k = (key, tuple(np.round(direction, 12).tolist()), float(arclength))
        if k not in self._shot:
            self._shot[k] = geodesic_shoot(self.metric, p - shift, direction, arclength) - (p - shift)
        return p + self._shot[k]
