"""Mean and directed curvature from hinge angles and intrinsic geometry.

Every estimate here is a weighted scalar sum of hinge angles.  The weights
depend only on edge lengths and the dual tessellation, so the same code
serves surfaces in Euclidean and non-Euclidean ambient spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dual import triangle_local_coords
from .errors import EmptyRegion
from .surface import develop_strip

DIM = 2  # surfaces


def hinge_crossing_angle(phi, theta):
    """Turning angle of a straight path crossing one hinge.

    ``phi`` is the hinge angle and ``theta`` the angle between the path and
    the hinge normal.  Exact: ``sin(psi/2) = cos(theta) sin(phi/2)``.
    """
    return 2.0 * np.arcsin(np.cos(theta) * np.sin(np.asarray(phi) / 2.0))


def geodesic_tangent_integral(path):
    """Total turning of the tangent along a straight path in the surface.

    Parameters
    ----------
    path : iterable of (phi, theta)
        Hinge angle and crossing angle for each hinge the path meets.
    """
    arr = np.asarray(list(path), dtype=float).reshape(-1, 2)
    if len(arr) == 0:
        return 0.0
    return float(np.sum(hinge_crossing_angle(arr[:, 0], arr[:, 1])))


def _values(hinges):
    return np.asarray(getattr(hinges, "values", hinges), dtype=float)


def mean_curvature(surface, hinges, dual):
    """Average mean curvature over each dual cell.

    ``H_v = 1 / (2 |V_v|) * sum over edges at v of |h cap V_v| * phi_h``.
    Boundary vertices get NaN through their NaN hinge angles.
    """
    phi = _values(hinges)
    num = np.zeros(surface.n_vertices)
    np.add.at(num, surface.edges[:, 0], dual.splits[:, 0] * phi)
    np.add.at(num, surface.edges[:, 1], dual.splits[:, 1] * phi)
    return num / (DIM * dual.areas)


def total_mean_curvature(surface, hinges):
    """``(1/2) * sum_h |h| phi_h`` over all hinges."""
    phi = _values(hinges)
    return float(np.nansum(surface.lengths * phi) / DIM)


# -- hinge regions -----------------------------------------------------


@dataclass
class Contribution:
    edge: int
    length: float
    theta: float


@dataclass
class HingeRegion:
    """Averaging region of a hinge, in strip-development coordinates.

    The hinge runs from (0, 0) to (|h|, 0); ``polygons`` are the clipped
    dual-cell fragments and ``contributions`` the edges meeting the region
    with their intersection length and angle to the hinge.
    """

    edge: int
    hinge_length: float
    polygons: list = field(default_factory=list)
    area: float = 0.0
    contributions: list = field(default_factory=list)

    @property
    def theta_count(self):
        return len(self.contributions)

    def weights(self):
        """(edge ids, |h_i cap V_h| cos^2 theta_i)."""
        ids = np.array([c.edge for c in self.contributions], dtype=np.int64)
        w = np.array([c.length * math.cos(c.theta) ** 2 for c in self.contributions])
        return ids, w


def clip_polygon(poly, lo, hi, tol=0.0):
    """Clip a convex polygon to the vertical strip ``lo <= x <= hi``."""
    pts = [np.asarray(p, dtype=float) for p in poly]
    for bound, keep in ((lo - tol, lambda x, b: x >= b), (hi + tol, lambda x, b: x <= b)):
        if not pts:
            break
        out = []
        n = len(pts)
        for i in range(n):
            p, q = pts[i], pts[(i + 1) % n]
            pin, qin = keep(p[0], bound), keep(q[0], bound)
            if pin:
                out.append(p)
            if pin != qin:
                s = (bound - p[0]) / (q[0] - p[0])
                out.append(np.array([bound, p[1] + s * (q[1] - p[1])]))
        pts = out
    return np.array(pts).reshape(-1, 2)


def clip_segment(p, q, lo, hi, tol=0.0):
    """Length of the segment p-q inside ``lo <= x <= hi``."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    L = float(np.linalg.norm(q - p))
    dx = q[0] - p[0]
    lo, hi = lo - tol, hi + tol
    if abs(dx) <= 1e-15 * max(L, 1.0):
        return L if lo <= p[0] <= hi else 0.0
    t0, t1 = (lo - p[0]) / dx, (hi - p[0]) / dx
    if t0 > t1:
        t0, t1 = t1, t0
    a, b = max(t0, 0.0), min(t1, 1.0)
    return L * (b - a) if b > a else 0.0


def _shoelace(poly):
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def build_hinge_region(surface, dual, hinge, development=None, tol=1e-12):
    """Region of the hinge ``h = (u, v)``: the dual cells of u and v, cut to
    the strip swept by lines orthogonal to h.

    Raises
    ------
    BoundaryHinge
        For boundary edges (via the strip development).
    EmptyRegion
        If the clipped region has no area.
    """
    e = int(hinge)
    dev = development if development is not None else develop_strip(surface, e)
    u, v = (int(x) for x in surface.edges[e])
    L = float(surface.lengths[e])
    ctol = tol * L
    region = HingeRegion(edge=e, hinge_length=L)
    seen = set()
    pieces = {}
    for pl in dev.placements:
        pivots = (u, v) if pl.pivot is None else (pl.pivot,)
        if pl.sweep >= math.pi / 2:
            continue
        t = pl.triangle
        tri = surface.triangles[t]
        for c in pivots:
            if (t, c) in seen:
                continue
            seen.add((t, c))
            k = int(np.nonzero(tri == c)[0][0])
            poly = clip_polygon(dual.fragment_barycentric(t, k) @ pl.coords, 0.0, L, ctol)
            a = _shoelace(poly)
            if a > ctol * L:
                region.polygons.append(poly)
                region.area += a
            pc = pl.coords[k]
            for j in (1, 2):
                kk = (k + j) % 3
                other = int(tri[kk])
                edge = surface.edge_id(c, other)
                mid = 0.5 * (pc + pl.coords[kk])
                length = clip_segment(pc, mid, 0.0, L, ctol)
                if length <= 8 * ctol:
                    continue
                d = pl.coords[kk] - pc
                theta = math.atan2(abs(d[1]), abs(d[0]))
                key = (edge, c)
                if key not in pieces or length > pieces[key][0]:
                    pieces[key] = (length, theta)
    if region.area <= 0.0:
        raise EmptyRegion(e)
    merged = {}
    for (edge, _), (length, theta) in pieces.items():
        if edge in merged:
            merged[edge] = (merged[edge][0] + length, merged[edge][1])
        else:
            merged[edge] = (length, theta)
    region.contributions = [Contribution(ed, ln, th) for ed, (ln, th) in sorted(merged.items())]
    return region


def directed_curvature(surface, hinges, region):
    """Average curvature orthogonal to the hinge over its region.

    ``kappa_h = 1/|V_h| * sum_i |h_i cap V_h| cos^2(theta_i) phi_i``.
    """
    phi = _values(hinges)
    ids, w = region.weights()
    return float(np.dot(w, phi[ids]) / region.area)


def hinge_regions(surface, dual):
    """Hinge regions for every interior edge (None for boundary edges)."""
    out = []
    for e in range(surface.n_edges):
        out.append(None if surface.is_boundary_edge(e) else build_hinge_region(surface, dual, e))
    return out


def directed_curvatures(surface, hinges, dual=None, regions=None):
    """``kappa_h`` for every edge; NaN on boundary edges."""
    if regions is None:
        regions = hinge_regions(surface, dual)
    return np.array([
        np.nan if r is None else directed_curvature(surface, hinges, r) for r in regions
    ])


# -- per-triangle tensor ----------------------------------------------


@dataclass
class TriangleCurvatureTensor:
    """Second fundamental form of one triangle.

    ``matrix`` is expressed in the orthonormal ``frame`` (rows are the two
    unit vectors, in the triangle's own planar coordinates from
    :func:`pfcurv.dual.triangle_local_coords`).  The first frame vector is
    the in-plane normal of the edge opposite corner 0.
    """

    triangle: int
    matrix: np.ndarray
    frame: np.ndarray

    def principal(self):
        return np.linalg.eigvalsh(self.matrix)


def edge_normals_local(P):
    """Outward in-plane unit normals of the edges opposite corners 0, 1, 2."""
    out = np.empty((3, 2))
    for k in range(3):
        a, b = P[(k + 1) % 3], P[(k + 2) % 3]
        d = (b - a) / np.linalg.norm(b - a)
        out[k] = (d[1], -d[0])  # right of a -> b is outside for CCW triangles
    return out


def triangle_tensor(surface, triangle, kappa):
    """Curvature tensor of a triangle from the directed curvature at its edges.

    ``kappa`` is either a per-edge array or the three values for the edges
    opposite corners 0, 1, 2.  The mixed term follows from the edge-normal
    closure relation ``sum |l_i| v_i = 0``.
    """
    t = int(triangle)
    kappa = np.asarray(kappa, dtype=float)
    k3 = kappa[surface.triangle_edges[t]] if kappa.shape != (3,) else kappa
    l = surface.triangle_lengths[t]
    P = triangle_local_coords(surface, t)
    nrm = edge_normals_local(P)
    v1, v2 = nrm[0], nrm[1]
    alpha12 = (-l[0] ** 2 * k3[0] - l[1] ** 2 * k3[1] + l[2] ** 2 * k3[2]) / (2 * l[0] * l[1])
    e1 = v1
    e2 = np.array([-v1[1], v1[0]])
    cb, sb = float(np.dot(v2, e1)), float(np.dot(v2, e2))
    q11 = k3[0]
    q12 = (alpha12 - cb * q11) / sb
    q22 = (k3[1] - cb * cb * q11 - 2 * sb * cb * q12) / (sb * sb)
    return TriangleCurvatureTensor(t, np.array([[q11, q12], [q12, q22]]), np.array([e1, e2]))
