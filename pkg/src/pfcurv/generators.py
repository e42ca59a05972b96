"""Deterministic meshes for the experiments.

* Layered triangulations of star-shaped surfaces: rings of vertices on
  latitudes equally spaced in polar angle, with ring sizes that grow by six
  per layer near the poles and stay constant across a middle band.
* Regular grids on a cylinder.
* Rectangular and skew grids on the tilted plane in the Gowdy metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embedding import embed
from .errors import UnknownSurface, UnsupportedLayerCount
from .layers import SurfaceSampling
from .metric import GeodesicCache
from .smooth import GOWDY_A, GOWDY_B, surface_sampler
from .surface import SimplicialSurface, edges_from_triangles

LAYER_COUNTS = (6, 10, 14, 18, 22)
RADIAL = ("modified-sphere", "peanut", "round-sphere")


@dataclass
class LayeredSphereScheme:
    """Ring layout of a layered sphere triangulation.

    ``ring_sizes[i]`` is the number of vertices on latitude i (1 at each
    pole), ``offsets[i]`` the azimuthal phase of the ring in units of its
    own spacing.
    """

    layers: int
    ring_sizes: list
    offsets: list
    thetas: np.ndarray = field(repr=False, default=None)

    @property
    def n_vertices(self):
        return int(sum(self.ring_sizes))


def layered_scheme(L):
    """Ring sizes for ``L`` layers of triangles between the poles.

    With ``m = (L + 2) / 4`` the rings hold 6, 12, ..., 6(m-1) vertices,
    then ``L - 2m + 1`` rings of 6m vertices, then the mirror image.
    Consecutive rings in the constant band are shifted by half a step.

    Raises
    ------
    UnsupportedLayerCount
        Unless ``L >= 6`` and ``L = 2 mod 4``.
    """
    if not isinstance(L, (int, np.integer)) or L < 6 or L % 4 != 2:
        raise UnsupportedLayerCount(L)
    m = (L + 2) // 4
    sizes, offsets = [1], [0.0]
    for i in range(1, L):
        if i < m:
            sizes.append(6 * i)
            offsets.append(0.0)
        elif i <= L - m:
            sizes.append(6 * m)
            offsets.append(0.5 * ((i - m) % 2))
        else:
            sizes.append(6 * (L - i))
            offsets.append(0.0)
    sizes.append(1)
    offsets.append(0.0)
    thetas = np.arange(L + 1) * (math.pi / L)
    return LayeredSphereScheme(L, sizes, offsets, thetas)


def _zip_rings(A, angA, B, angB):
    """Triangulate the band between two closed rings by sweeping in angle.

    A and B are vertex-id lists with ascending azimuths (radians, starting
    near 0).  Ties advance the smaller ring first.
    """
    tris = []
    nA, nB = len(A), len(B)
    i = j = 0
    small_first = nA <= nB
    while i < nA or j < nB:
        nextA = angA[i + 1] if i + 1 < nA else angA[0] + 2 * math.pi
        nextB = angB[j + 1] if j + 1 < nB else angB[0] + 2 * math.pi
        adv_a = i < nA and (j >= nB or nextA < nextB - 1e-12 or (abs(nextA - nextB) <= 1e-12 and small_first))
        if adv_a:
            tris.append((A[i % nA], B[j % nB], A[(i + 1) % nA]))
            i += 1
        else:
            tris.append((A[i % nA], B[j % nB], B[(j + 1) % nB]))
            j += 1
    return tris


def layered_triangles(scheme):
    """Vertex ids per ring, azimuths, and triangles of a scheme."""
    rings, angles = [], []
    start = 0
    for n, off in zip(scheme.ring_sizes, scheme.offsets):
        rings.append(list(range(start, start + n)))
        angles.append((np.arange(n) + off) * (2 * math.pi / n))
        start += n
    tris = []
    north, south = rings[0][0], rings[-1][0]
    first, last = rings[1], rings[-2]
    for k in range(len(first)):
        tris.append((north, first[k], first[(k + 1) % len(first)]))
    for k in range(len(last)):
        tris.append((south, last[(k + 1) % len(last)], last[k]))
    for r in range(1, len(rings) - 2):
        tris.extend(_zip_rings(rings[r], angles[r], rings[r + 1], angles[r + 1]))
    return rings, angles, np.array(tris, dtype=np.int64)


@dataclass
class GeneratedMesh:
    """A generated mesh with the smooth surface and parameter tags.

    ``params`` holds the generating parameters of each vertex (polar and
    azimuthal angles for radial surfaces).
    """

    embedded: object
    smooth: object
    params: np.ndarray
    name: str
    resolution: int

    @property
    def surface(self):
        return self.embedded.surface

    def sampling(self):
        """Vertex points with smooth orientation normals."""
        pts = self.embedded.positions
        return SurfaceSampling(self.surface, pts, self.smooth.normals(pts), self.embedded.lifts)


def _orient_outward(positions, triangles, lifts=None):
    P = positions[triangles] if lifts is None else positions[triangles] + lifts
    n = np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])
    flip = np.einsum("ij,ij->i", n, P.mean(axis=1)) < 0
    out = triangles.copy()
    out[flip] = out[flip][:, ::-1]
    return out


def generate_layered_surface(name, L, **params):
    """Layered triangulation of a star-shaped surface with vertices on it.

    Raises
    ------
    UnknownSurface
        For names other than modified-sphere, peanut, round-sphere.
    UnsupportedLayerCount
    """
    if name not in RADIAL:
        raise UnknownSurface(name)
    smooth = surface_sampler(name, **params)
    scheme = layered_scheme(L)
    rings, angles, tris = layered_triangles(scheme)
    theta = np.concatenate([np.full(len(r), scheme.thetas[i]) for i, r in enumerate(rings)])
    phi = np.concatenate(angles)
    pos = smooth.point(theta, phi)
    tris = _orient_outward(pos, tris)
    emb = embed(pos, tris)
    return GeneratedMesh(emb, smooth, np.column_stack([theta, phi]), name, L)


def generate_cylinder_grid(n_around=24, n_rows=8, radius=1.0, height=None, periodic=True):
    """Regular cylinder grid with every quad split along the same diagonal.

    ``height`` defaults to roughly square cells.  With ``periodic`` the grid
    wraps in z through per-triangle lifts, so it has no boundary.
    """
    dphi = 2 * math.pi / n_around
    if height is None:
        height = n_rows * radius * dphi
    dz = height / n_rows
    smooth = surface_sampler("cylinder", radius=radius)
    rows = n_rows if periodic else n_rows + 1
    ii, jj = np.meshgrid(np.arange(n_around), np.arange(rows), indexing="ij")
    phi = (ii * dphi).ravel()
    z = (jj * dz).ravel()
    pos = smooth.point(phi, z)

    def vid(i, j):
        return (i % n_around) * rows + (j % rows)

    tris, lifts = [], []
    for i in range(n_around):
        for j in range(n_rows if periodic else n_rows):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1)], [(i, j), (i + 1, j + 1), (i, j + 1)]
            for c in corners:
                tris.append([vid(a, b) for a, b in c])
                lifts.append([[0.0, 0.0, height if b >= rows else 0.0] for a, b in c])
    tris = np.array(tris, dtype=np.int64)
    lifts = np.array(lifts)
    emb = embed(pos, tris, lifts if periodic else None)
    return GeneratedMesh(emb, smooth, np.column_stack([phi, z]), "cylinder", n_around)


# -- Gowdy grids --------------------------------------------------------

GOWDY_KINDS = {"rectangular": "rect", "rect": "rect", "skew": "skew"}
GOWDY_SKEW_B = np.array([-1.0, -2.0 / 3.0, math.pi]) / 3.0


@dataclass
class GowdyGrid:
    """A triangulated patch of the tilted plane, periodic in both directions.

    Vertex (i, j) sits at ``i * a + j * b``; ``a``, ``b`` and ``c = a + b``
    are the three edge vectors.  The grid wraps after ``columns`` steps of
    ``a`` and ``blocks`` steps of ``b`` (one period in z).  ``edge_type``
    labels each edge 'a', 'b' or 'c'.
    """

    kind: str
    blocks: int
    columns: int
    surface: SimplicialSurface
    sampling: SurfaceSampling
    smooth: object
    vectors: dict
    edge_type: np.ndarray
    edge_ends: np.ndarray
    dual_kind: str
    cache: object = None


def generate_gowdy_grids(kind, blocks, columns=4, cache=None, amp=0.1):
    """Triangulate one z-period of the tilted plane in the Gowdy metric.

    Edge lengths are geodesic distances under the ambient metric.  The
    rectangular grid is not Delaunay and is paired with barycentric duals;
    the skew grid with Voronoi duals.

    Parameters
    ----------
    kind : {"rectangular", "skew"}
    blocks : int
        Number of grid rows per period of the metric in z.
    columns : int
        Number of grid columns before the grid wraps in y.
    cache : GeodesicCache, optional
        Shared geodesic cache (reused across layer construction).
    """
    try:
        kind = GOWDY_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown grid kind {kind!r}; expected rectangular or skew") from None
    smooth = surface_sampler("gowdy-plane", amp=amp)
    cache = cache if cache is not None else GeodesicCache(smooth.metric)
    scale = 6.0 / blocks
    a = GOWDY_A * scale
    b = (GOWDY_B if kind == "rect" else GOWDY_SKEW_B) * scale
    c = a + b
    k, B = int(columns), int(blocks)
    ii, jj = np.meshgrid(np.arange(k), np.arange(B), indexing="ij")
    pos = (ii.ravel()[:, None] * a + jj.ravel()[:, None] * b)
    wrap_a, wrap_b = k * a, B * b

    def vid(i, j):
        return (i % k) * B + (j % B)

    def lift(i, j):
        return (i // k) * wrap_a + (j // B) * wrap_b

    tris, lifts = [], []
    for i in range(k):
        for j in range(B):
            for cell in (((i, j), (i + 1, j), (i + 1, j + 1)), ((i, j), (i + 1, j + 1), (i, j + 1))):
                tris.append([vid(*p) for p in cell])
                lifts.append([lift(*p) for p in cell])
    tris = np.array(tris, dtype=np.int64)
    lifts = np.array(lifts)
    # orientation normal points toward +x: a x b has positive x for both kinds
    edges = edges_from_triangles(tris)
    index = {tuple(e): n for n, e in enumerate(edges.tolist())}
    ends = np.zeros((len(edges), 2, 3))
    etype = np.empty(len(edges), dtype="<U1")
    P = pos[tris] + lifts
    for t, tri in enumerate(tris.tolist()):
        for m in range(3):
            u, v = tri[m], tri[(m + 1) % 3]
            e = index[(u, v) if u < v else (v, u)]
            p, q = P[t, m], P[t, (m + 1) % 3]
            if u > v:
                p, q = q, p
            ends[e] = (p, q)
            d = q - p
            s = 1.0 if np.dot(d, c) >= 0 else -1.0
            d = s * d
            etype[e] = "a" if np.allclose(d, a) else "b" if np.allclose(d, b) else "c"
    lengths = cache.distances(ends[:, 0], ends[:, 1])
    surface = SimplicialSurface(k * B, edges, lengths, tris)
    normals = smooth.normals(pos)
    sampling = SurfaceSampling(surface, pos, normals, lifts)
    return GowdyGrid(
        kind, B, k, surface, sampling, smooth, {"a": a, "b": b, "c": c}, etype, ends,
        "barycentric" if kind == "rect" else "voronoi", cache,
    )
