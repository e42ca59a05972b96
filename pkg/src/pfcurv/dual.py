"""Vertex-dual tessellations (circumcentric and barycentric).

Every triangle is split into three corner fragments, one per vertex, by the
two edge midpoints at that corner and a single interior centre point: the
circumcentre for Voronoi duals, the centroid for barycentric ones.  Centres
are stored in barycentric coordinates so that fragments can be mapped into
any planar placement of the triangle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotDelaunay

KINDS = ("voronoi", "barycentric")

# corner k, its two neighbours in orientation order
_NEXT = (1, 2, 0)
_PREV = (2, 0, 1)


@dataclass
class DualTessellation:
    """Dual cells of a :class:`~pfcurv.surface.SimplicialSurface`.

    Attributes
    ----------
    kind : str
        ``"voronoi"`` or ``"barycentric"``.
    centers : ndarray, shape (F, 3)
        Barycentric coordinates of each triangle's centre point.
    clamped : ndarray of bool, shape (F,)
        Triangles whose circumcentre fell outside and was moved to the
        midpoint of the longest edge (mixed fallback).
    fragment_areas : ndarray, shape (F, 3)
        Area of the fragment of corner k in triangle t.
    areas : ndarray, shape (V,)
        Cell areas |V_v|.
    splits : ndarray, shape (E, 2)
        Length of edge e inside the cells of ``edges[e, 0]`` and
        ``edges[e, 1]``.
    """

    kind: str
    centers: np.ndarray
    clamped: np.ndarray
    fragment_areas: np.ndarray
    areas: np.ndarray
    splits: np.ndarray

    @property
    def mixed(self):
        return bool(self.clamped.any())

    def fragment_barycentric(self, t, k):
        """Corner-k fragment of triangle t as a (4, 3) barycentric polygon."""
        return _fragment(self.centers[t], k)


def circumcenter_barycentric(lengths):
    """Barycentric circumcentres from (F, 3) opposite-side lengths."""
    a2 = np.asarray(lengths, dtype=float) ** 2
    w = np.empty_like(a2)
    for k in range(3):
        w[:, k] = a2[:, k] * (a2[:, _NEXT[k]] + a2[:, _PREV[k]] - a2[:, k])
    return w / w.sum(axis=1, keepdims=True)


def _fragment(center, k):
    e = np.eye(3)
    return np.array([
        e[k],
        0.5 * (e[k] + e[_NEXT[k]]),
        center,
        0.5 * (e[k] + e[_PREV[k]]),
    ])


def build_dual(surface, kind="voronoi", mixed=True, tol=1e-12):
    """Build the dual tessellation of ``surface``.

    Parameters
    ----------
    kind : {"voronoi", "barycentric"}
    mixed : bool
        Voronoi only.  When a circumcentre leaves its triangle, clamp it to
        the midpoint of the edge opposite the obtuse corner instead of
        raising.  This is the mixed Voronoi-barycentric scheme.
    tol : float
        Barycentric slack allowed before a circumcentre counts as outside.

    Raises
    ------
    NotDelaunay
        ``kind="voronoi"``, ``mixed=False`` and some circumcentre lies outside.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown dual kind {kind!r}; expected one of {KINDS}")
    L = surface.triangle_lengths
    F = len(L)
    clamped = np.zeros(F, dtype=bool)
    if kind == "barycentric":
        centers = np.full((F, 3), 1.0 / 3.0)
    else:
        centers = circumcenter_barycentric(L)
        outside = centers.min(axis=1) < -tol
        if outside.any():
            if not mixed:
                raise NotDelaunay(int(np.nonzero(outside)[0][0]))
            for t in np.nonzero(outside)[0]:
                k = int(np.argmin(centers[t]))
                c = np.full(3, 0.5)
                c[k] = 0.0
                centers[t] = c
            clamped = outside
        centers = np.where(np.abs(centers) < tol, 0.0, centers)

    tri_area = surface.triangle_areas()
    frag = np.empty((F, 3))
    for k in range(3):
        e = np.eye(3)
        mid_next = 0.5 * (e[k] + e[_NEXT[k]])
        mid_prev = 0.5 * (e[k] + e[_PREV[k]])
        polys = np.empty((F, 4, 3))
        polys[:, 0] = e[k]
        polys[:, 1] = mid_next
        polys[:, 2] = centers
        polys[:, 3] = mid_prev
        x, y = polys[..., 1], polys[..., 2]
        ref = 0.5 * (np.sum(x * np.roll(y, -1, axis=1), axis=1) - np.sum(np.roll(x, -1, axis=1) * y, axis=1))
        frag[:, k] = 2.0 * tri_area * ref

    areas = np.zeros(surface.n_vertices)
    np.add.at(areas, surface.triangles.ravel(), frag.ravel())
    splits = np.column_stack([surface.lengths / 2, surface.lengths / 2])
    return DualTessellation(kind, centers, clamped, frag, areas, splits)


def triangle_local_coords(surface, t):
    """Intrinsic planar coordinates of triangle ``t``.

    Corner 0 at the origin, corner 1 on the positive x-axis, corner 2 above.
    """
    l = surface.triangle_lengths[t]
    c = l[2]  # corner0 - corner1
    b = l[1]  # corner0 - corner2
    a = l[0]
    x = (b * b + c * c - a * a) / (2 * c)
    y = np.sqrt(max(b * b - x * x, 0.0))
    return np.array([[0.0, 0.0], [c, 0.0], [x, y]])


def cell_fragments_in_triangle(dual, surface, triangle):
    """The three dual-cell fragments of ``triangle`` in its own planar coordinates.

    Returns a list of three (4, 2) polygons; entry k belongs to corner k.
    """
    P = triangle_local_coords(surface, triangle)
    return [dual.fragment_barycentric(triangle, k) @ P for k in range(3)]


def polygon_area(poly):
    """Shoelace area (signed, counter-clockwise positive)."""
    poly = np.asarray(poly, dtype=float)
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
