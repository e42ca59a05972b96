"""Intrinsic simplicial surfaces and their planar developments.

A :class:`SimplicialSurface` stores only the simplicial graph and one length
per edge.  Coordinates, when they exist, belong to the embedding modules.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BoundaryHinge,
    InconsistentOrientation,
    MeshError,
    NonManifoldEdge,
    OpenFan,
    TriangleInequalityViolated,
)

PLACEMENT_RTOL = 1e-12


def _key(a, b):
    return (a, b) if a < b else (b, a)


class SimplicialSurface:
    """Oriented simplicial surface with intrinsic edge lengths.

    Parameters
    ----------
    n_vertices : int
        Number of vertices; ids are ``0 .. n_vertices - 1``.
    edges : array_like, shape (E, 2)
        Vertex pairs.
    lengths : array_like, shape (E,)
        Positive edge lengths.
    triangles : array_like, shape (F, 3)
        Oriented vertex triples.

    Use :func:`build_surface` rather than calling the constructor with
    unchecked data; the constructor performs the same validation.
    """

    def __init__(self, n_vertices, edges, lengths, triangles):
        self.n_vertices = int(n_vertices)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.lengths = np.asarray(lengths, dtype=float).reshape(-1)
        self.triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        if len(self.lengths) != len(self.edges):
            raise MeshError("one length per edge is required")
        self._index()
        self._check_lengths()

    # -- construction -------------------------------------------------

    def _index(self):
        V, E = self.n_vertices, len(self.edges)
        if V == 0 or E == 0 or len(self.triangles) == 0:
            raise MeshError("empty complex")
        used = np.unique(np.concatenate([self.edges.ravel(), self.triangles.ravel()]))
        if used[0] < 0 or used[-1] >= V or len(used) != V:
            raise MeshError("vertex ids must be dense in 0..V-1")
        if np.any(self.edges[:, 0] == self.edges[:, 1]):
            raise MeshError("an edge joins a vertex to itself")
        if not np.all(np.isfinite(self.lengths)) or np.any(self.lengths <= 0):
            raise MeshError("edge lengths must be positive")

        self._edge_index = {}
        for e, (a, b) in enumerate(self.edges.tolist()):
            k = _key(a, b)
            if k in self._edge_index:
                raise MeshError(f"duplicate edge {k}")
            self._edge_index[k] = e

        F = len(self.triangles)
        tri_edges = np.empty((F, 3), dtype=np.int64)
        self._half_edge = {}
        edge_tris = [[] for _ in range(E)]
        for t, (a, b, c) in enumerate(self.triangles.tolist()):
            if len({a, b, c}) != 3:
                raise MeshError(f"triangle {t} repeats a vertex")
            # edge opposite corner k
            for k, (p, q) in enumerate(((b, c), (c, a), (a, b))):
                e = self._edge_index.get(_key(p, q))
                if e is None:
                    raise MeshError(f"triangle {t} uses missing edge {_key(p, q)}")
                tri_edges[t, k] = e
                edge_tris[e].append(t)
                if len(edge_tris[e]) > 2:
                    raise NonManifoldEdge(e)
                if (p, q) in self._half_edge:
                    raise InconsistentOrientation(e)
                self._half_edge[(p, q)] = t
        for e, ts in enumerate(edge_tris):
            if len(ts) == 0:
                raise MeshError(f"edge {e} borders no triangle")
        self.triangle_edges = tri_edges
        self.edge_triangles = [tuple(ts) for ts in edge_tris]

        vtris = [[] for _ in range(V)]
        for t, tri in enumerate(self.triangles.tolist()):
            for v in tri:
                vtris[v].append(t)
        self.vertex_triangles = [tuple(ts) for ts in vtris]
        vedges = [[] for _ in range(V)]
        for e, (a, b) in enumerate(self.edges.tolist()):
            vedges[a].append(e)
            vedges[b].append(e)
        self.vertex_edges = [tuple(es) for es in vedges]
        # every vertex star must be a single fan
        for v in range(V):
            fan, _ = self._fan_order(v)
            if len(fan) != len(self.vertex_triangles[v]):
                raise MeshError(f"vertex {v} is not a manifold vertex")

    def _check_lengths(self):
        L = self.triangle_lengths
        s = L.sum(axis=1)
        bad = np.nonzero(np.any(2 * L >= s[:, None], axis=1))[0]
        if len(bad):
            raise TriangleInequalityViolated(int(bad[0]))

    # -- basic queries ------------------------------------------------

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_triangles(self):
        return len(self.triangles)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_triangles

    def edge_id(self, a, b):
        """Edge id joining vertices ``a`` and ``b`` (KeyError if absent)."""
        return self._edge_index[_key(int(a), int(b))]

    def has_edge(self, a, b):
        return _key(int(a), int(b)) in self._edge_index

    def triangle_of(self, a, b):
        """Triangle containing the directed edge ``a -> b``, or None."""
        return self._half_edge.get((int(a), int(b)))

    @property
    def triangle_lengths(self):
        """(F, 3) lengths; column k is the edge opposite corner k."""
        return self.lengths[self.triangle_edges]

    def is_boundary_edge(self, e):
        return len(self.edge_triangles[e]) == 1

    @property
    def boundary_edges(self):
        return [e for e, ts in enumerate(self.edge_triangles) if len(ts) == 1]

    def is_boundary_vertex(self, v):
        return any(self.is_boundary_edge(e) for e in self.vertex_edges[v])

    def triangle_areas(self):
        """Areas from edge lengths (Kahan's stable Heron formula)."""
        L = np.sort(self.triangle_lengths, axis=1)[:, ::-1]
        a, b, c = L[:, 0], L[:, 1], L[:, 2]
        return 0.25 * np.sqrt(
            (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        )

    def total_area(self):
        return float(self.triangle_areas().sum())

    def corner_angles(self):
        """(F, 3) interior angles; column k is the angle at corner k."""
        L = self.triangle_lengths
        out = np.empty_like(L)
        for k in range(3):
            a, b, c = L[:, k], L[:, (k + 1) % 3], L[:, (k + 2) % 3]
            out[:, k] = np.arccos(np.clip((b * b + c * c - a * a) / (2 * b * c), -1.0, 1.0))
        return out

    @cached_property
    def angle_table(self):
        return self.corner_angles()

    def angle_sums(self):
        sums = np.zeros(self.n_vertices)
        np.add.at(sums, self.triangles.ravel(), self.corner_angles().ravel())
        return sums

    def rotate_to(self, t, v):
        """Corners of triangle ``t`` cyclically rotated to start at ``v``."""
        a, b, c = (int(x) for x in self.triangles[t])
        if v == a:
            return a, b, c
        if v == b:
            return b, c, a
        if v == c:
            return c, a, b
        raise ValueError(f"vertex {v} not in triangle {t}")

    def _fan_order(self, v):
        """Triangles around ``v`` in orientation (counter-clockwise) order."""
        ts = self.vertex_triangles[v]
        start = ts[0]
        closed = True
        # rewind clockwise to a boundary triangle if there is one
        t = start
        seen = {t}
        while True:
            _, a, _ = self.rotate_to(t, v)
            prev = self._half_edge.get((a, v))
            if prev is None:
                closed = False
                start = t
                break
            if prev == start or prev in seen:
                break
            seen.add(prev)
            t = prev
        order = [start]
        t = start
        while True:
            _, _, b = self.rotate_to(t, v)
            nxt = self._half_edge.get((v, b))
            if nxt is None or nxt == start:
                break
            if nxt in order:
                break
            order.append(nxt)
            t = nxt
        return order, closed

    def vertex_fan(self, v):
        """(triangles in CCW order, closed?) for the star of ``v``."""
        return self._fan_order(v)

    def with_lengths(self, lengths):
        """Same graph, new edge lengths."""
        return SimplicialSurface(self.n_vertices, self.edges, lengths, self.triangles)


def build_surface(edges, triangles, n_vertices=None):
    """Build and validate a surface from ``(u, v, length)`` edges and triangles.

    Raises
    ------
    TriangleInequalityViolated, NonManifoldEdge, InconsistentOrientation
        When the input violates the corresponding invariant.
    """
    edges = list(edges)
    pairs = np.array([[int(u), int(v)] for u, v, _ in edges], dtype=np.int64).reshape(-1, 2)
    lengths = np.array([float(l) for _, _, l in edges])
    triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    if n_vertices is None:
        n_vertices = int(max(pairs.max(), triangles.max())) + 1
    return SimplicialSurface(n_vertices, pairs, lengths, triangles)


def edges_from_triangles(triangles):
    """Unique sorted vertex pairs used by ``triangles``, in first-seen order."""
    seen = {}
    for a, b, c in np.asarray(triangles).tolist():
        for p, q in ((a, b), (b, c), (c, a)):
            k = _key(p, q)
            if k not in seen:
                seen[k] = len(seen)
    return np.array(list(seen), dtype=np.int64).reshape(-1, 2)


# -- developments ------------------------------------------------------


@dataclass
class Placement:
    """A triangle rigidly placed in the plane.

    ``coords[k]`` is the planar position of corner ``k`` of the triangle
    (in the surface's stored corner order).  ``pivot`` is the vertex whose
    fan walk placed it (None for the base triangles of a strip), and
    ``sweep`` is the smallest angle between the triangle's wedge at the pivot
    and the base edge direction.
    """

    triangle: int
    coords: np.ndarray
    pivot: int | None = None
    sweep: float = 0.0


@dataclass
class PlacedEdge:
    edge: int
    segment: np.ndarray
    theta: float
    placement: int


@dataclass
class Development:
    """Planar unfolding of a chain of triangles.

    Attributes
    ----------
    base_edge : int
        Edge laid along the positive x-axis from the origin.
    placements : list of Placement
        Placed triangles.  A triangle may be placed twice when two walks
        meet on the far side of a vertex.
    edges : list of PlacedEdge
        Every edge of every placement, with its angle in ``[0, pi/2]`` to the
        x-axis.
    cumulative_angle : float
        Total angle swept at the centre (fan developments only).
    closed : bool
        False when a fan walk hit the boundary.
    """

    base_edge: int
    placements: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    cumulative_angle: float = float("nan")
    closed: bool = True
    center: int | None = None

    def add(self, surface, placement):
        idx = len(self.placements)
        self.placements.append(placement)
        t = placement.triangle
        P = placement.coords
        for k in range(3):
            e = int(surface.triangle_edges[t, k])
            seg = np.array([P[(k + 1) % 3], P[(k + 2) % 3]])
            d = seg[1] - seg[0]
            theta = math.atan2(abs(d[1]), abs(d[0]))
            self.edges.append(PlacedEdge(e, seg, theta, idx))
        return idx

    def placed_triangles(self):
        return [p.triangle for p in self.placements]


def _third_point(pa, pb, l_ab, l_ac, l_bc):
    """Apex c to the left of the directed segment a -> b."""
    d = (pb - pa) / l_ab
    x = (l_ab * l_ab + l_ac * l_ac - l_bc * l_bc) / (2 * l_ab)
    y = math.sqrt(max(l_ac * l_ac - x * x, 0.0))
    return pa + x * d + y * np.array([-d[1], d[0]])


def _place(surface, t, a, b, pa, pb):
    """Place triangle ``t`` given planar positions of its directed edge a -> b."""
    v0, v1, v2 = surface.rotate_to(t, a)
    if v1 != b:
        raise ValueError(f"{a}->{b} is not a directed edge of triangle {t}")
    c = v2
    l_ab = surface.lengths[surface.edge_id(a, b)]
    l_ac = surface.lengths[surface.edge_id(a, c)]
    l_bc = surface.lengths[surface.edge_id(b, c)]
    pc = _third_point(pa, pb, l_ab, l_ac, l_bc)
    pos = {a: pa, b: pb, c: pc}
    return np.array([pos[int(x)] for x in surface.triangles[t]])


def _corner(surface, t, P, v):
    k = int(np.nonzero(surface.triangles[t] == v)[0][0])
    return P[k]


def _corner_angle(surface, t, v):
    k = int(np.nonzero(surface.triangles[t] == v)[0][0])
    return float(surface.angle_table[t, k])


def develop_fan(surface, center_vertex, start_edge, strict=False):
    """Unfold the full triangle fan around ``center_vertex``.

    The start edge lies on the positive x-axis with the centre at the origin,
    and triangles follow in orientation order.  Overlap of the unfolded fan
    (angle sum above 2*pi) is allowed.

    Raises
    ------
    OpenFan
        Only when ``strict`` is set and the vertex is on the boundary; the
        development is attached to the exception.
    """
    v = int(center_vertex)
    a, b = (int(x) for x in surface.edges[start_edge])
    if v not in (a, b):
        raise ValueError(f"edge {start_edge} is not in the star of vertex {v}")
    w = b if a == v else a
    dev = Development(base_edge=int(start_edge), center=v)
    origin = np.zeros(2)
    pw = np.array([surface.lengths[start_edge], 0.0])
    order, closed = surface.vertex_fan(v)
    t0 = surface.triangle_of(v, w)
    total = 0.0
    if t0 is not None:
        dev.add(surface, Placement(t0, _place(surface, t0, v, w, origin, pw), v, 0.0))
        total += _corner_angle(surface, t0, v)
        cur = t0
        while True:
            _, _, nb = surface.rotate_to(cur, v)
            nxt = surface.triangle_of(v, nb)
            if nxt is None or nxt == t0:
                break
            P = dev.placements[-1].coords
            coords = _place(surface, nxt, v, nb, origin, _corner(surface, cur, P, nb))
            dev.add(surface, Placement(nxt, coords, v, total))
            total += _corner_angle(surface, nxt, v)
            cur = nxt
    if not closed:
        # walk clockwise from the start edge to cover the rest of an open fan
        tb = surface.triangle_of(w, v)
        if tb is not None and tb not in dev.placed_triangles():
            coords = _place(surface, tb, w, v, pw, origin)
            dev.add(surface, Placement(tb, coords, v, 0.0))
            total += _corner_angle(surface, tb, v)
            cur = tb
            while True:
                _, pa, _ = surface.rotate_to(cur, v)
                prv = surface.triangle_of(pa, v)
                if prv is None or prv in dev.placed_triangles():
                    break
                P = dev.placements[-1].coords
                coords = _place(surface, prv, pa, v, _corner(surface, cur, P, pa), origin)
                dev.add(surface, Placement(prv, coords, v, total))
                total += _corner_angle(surface, prv, v)
                cur = prv
        dev.closed = False
    dev.cumulative_angle = total
    if strict and not dev.closed:
        raise OpenFan(v, dev)
    return dev


def develop_strip(surface, hinge_edge):
    """Unfold star(u) and star(v) around the interior edge ``hinge_edge = (u, v)``.

    The hinge lies from (0, 0) to (|h|, 0), with the triangle containing the
    directed edge u -> v above the x-axis.  Each endpoint fan is unfolded
    outward from the two hinge triangles in both rotational directions; the
    two walks around an endpoint each take half of the remaining triangles,
    so the middle triangle of an odd remainder is placed twice.
    """
    e = int(hinge_edge)
    if surface.is_boundary_edge(e):
        raise BoundaryHinge(e)
    u, v = (int(x) for x in surface.edges[e])
    L = surface.lengths[e]
    pu, pv = np.zeros(2), np.array([L, 0.0])
    upper = surface.triangle_of(u, v)
    lower = surface.triangle_of(v, u)
    dev = Development(base_edge=e)
    dev.add(surface, Placement(upper, _place(surface, upper, u, v, pu, pv), None, 0.0))
    dev.add(surface, Placement(lower, _place(surface, lower, v, u, pv, pu), None, 0.0))

    for c, pc, first, second in ((u, pu, upper, lower), (v, pv, lower, upper)):
        fan, closed = surface.vertex_fan(c)
        remaining = len(fan) - 2
        if not closed:
            dev.closed = False
            n_fw = n_bw = len(fan)
        else:
            n_fw = n_bw = (remaining + 1) // 2
        # around u: counter-clockwise leaves the upper triangle; around v the
        # lower triangle is the one left counter-clockwise
        _walk_from(surface, dev, c, pc, first, True, n_fw)
        _walk_from(surface, dev, c, pc, second, False, n_bw)
    return dev


def _walk_from(surface, dev, center, pc, t, forward, n_steps):
    cur_t = t
    cur_P = next(p.coords for p in dev.placements if p.triangle == t and p.pivot is None)
    sweep = _corner_angle(surface, t, center)
    for _ in range(n_steps):
        _, a, b = surface.rotate_to(cur_t, center)
        if forward:
            nxt = surface.triangle_of(center, b)
            shared = b
        else:
            nxt = surface.triangle_of(a, center)
            shared = a
        if nxt is None:
            dev.closed = False
            return
        ps = _corner(surface, cur_t, cur_P, shared)
        if forward:
            coords = _place(surface, nxt, center, shared, pc, ps)
        else:
            coords = _place(surface, nxt, shared, center, ps, pc)
        dev.add(surface, Placement(nxt, coords, center, sweep))
        sweep += _corner_angle(surface, nxt, center)
        cur_t, cur_P = nxt, coords


# -- intrinsic mesh interchange ---------------------------------------


def write_ism(surface, path):
    """Write the plain-text intrinsic-mesh format (``ISM 1``)."""
    lines = ["ISM 1", f"{surface.n_vertices} {surface.n_edges} {surface.n_triangles}"]
    for (a, b), l in zip(surface.edges.tolist(), surface.lengths.tolist()):
        lines.append(f"{a} {b} {l!r}")
    for a, b, c in surface.triangles.tolist():
        lines.append(f"{a} {b} {c}")
    with open(os.fspath(path), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_ism(path):
    with open(os.fspath(path)) as fh:
        tokens = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not tokens or tokens[0] != ["ISM", "1"]:
        raise MeshError("missing 'ISM 1' header")
    V, E, F = (int(x) for x in tokens[1])
    body = tokens[2:]
    if len(body) != E + F:
        raise MeshError(f"expected {E} edge and {F} triangle lines, got {len(body)}")
    edges = [(int(a), int(b), float(l)) for a, b, l in body[:E]]
    tris = [[int(x) for x in row] for row in body[E:]]
    return build_surface(edges, tris, n_vertices=V)
