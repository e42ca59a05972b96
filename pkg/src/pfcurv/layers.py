"""Three-dimensional piecewise flat layers around a surface.

Hinge angles of a surface in a curved ambient space are not defined by
normals.  Instead a slab of tetrahedra is built on each side of the
surface, every tetrahedron edge getting its geodesic length, and the
dihedral angles of those flat tetrahedra at each surface edge are summed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import LAYERED, HingeField
from .errors import DegenerateTetrahedron
from .metric import GeodesicCache

# vertex pairs of a tetrahedron, in the column order of the length arrays
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PAIR_INDEX = {p: i for i, p in enumerate(TET_EDGES)}
_PAIR_INDEX.update({(j, i): k for (i, j), k in list(_PAIR_INDEX.items())})


@dataclass
class SurfaceSampling:
    """Chart points and unit normals for the vertices of a surface.

    ``lifts[t, k]`` translates vertex ``triangles[t, k]`` into the copy used
    by triangle ``t`` (periodic surfaces); translations must be isometries
    of the ambient metric.
    """

    surface: object
    points: np.ndarray
    normals: np.ndarray
    lifts: np.ndarray = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.normals = np.asarray(self.normals, dtype=float)
        if self.lifts is None:
            self.lifts = np.zeros((self.surface.n_triangles, 3, 3))


@dataclass
class LayeredComplex:
    """One slab of tetrahedra on the ``side`` (+1 or -1) of a surface.

    ``tets[i]`` lists four (vertex id, level) labels, level 0 on the surface
    and level 1 on the offset copy; ``lengths[i]`` holds the six edge
    lengths in :data:`TET_EDGES` order; ``triangle[i]`` is the prism the
    tetrahedron came from.
    """

    surface: object
    side: int
    offsets: np.ndarray
    tets: np.ndarray
    lengths: np.ndarray
    triangle: np.ndarray


# generic direction ordering the corners of each prism
SPLIT_DIRECTION = np.array([0.0, 1.0, 0.3])


def prism_tets(tri, reverse=False, keys=None):
    """Split the prism over a triangle into three tetrahedra.

    Corners are ordered by ``keys`` (default: the vertex ids), so a
    quadrilateral side shared by two prisms gets the same diagonal from
    both: it runs from the lower bottom vertex to the higher top vertex (or
    the other way round with ``reverse``).
    """
    ids = [int(v) for v in tri]
    keys = ids if keys is None else list(keys)
    order = sorted(range(3), key=lambda k: (keys[k], ids[k]), reverse=reverse)
    v0, v1, v2 = (ids[k] for k in order)
    return (
        ((v0, 0), (v1, 0), (v2, 0), (v2, 1)),
        ((v0, 0), (v1, 0), (v1, 1), (v2, 1)),
        ((v0, 0), (v0, 1), (v1, 1), (v2, 1)),
    )


def cayley_menger(lengths):
    """``288 V^2`` for tetrahedra given by (..., 6) edge lengths."""
    L2 = np.asarray(lengths, dtype=float) ** 2
    shape = L2.shape[:-1]
    CM = np.zeros(shape + (5, 5))
    CM[..., 0, 1:] = 1.0
    CM[..., 1:, 0] = 1.0
    for k, (i, j) in enumerate(TET_EDGES):
        CM[..., i + 1, j + 1] = CM[..., j + 1, i + 1] = L2[..., k]
    return np.linalg.det(CM)


def _cos_angle(a, b, c):
    """Angle opposite side c in a triangle with sides a, b, c."""
    return (a * a + b * b - c * c) / (2 * a * b)


def _area(a, b, c):
    s = np.sort(np.stack([a, b, c]), axis=0)[::-1]
    a, b, c = s
    return 0.25 * np.sqrt(np.maximum((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)), 0.0))


def dihedral_angles(lengths):
    """Interior dihedral angles of tetrahedra from their edge lengths.

    Parameters
    ----------
    lengths : array_like, shape (..., 6)
        Lengths in :data:`TET_EDGES` order.

    Returns
    -------
    ndarray, shape (..., 6)
        Dihedral angle at each edge, in the same order.

    Notes
    -----
    The cosine comes from the corner angles at one endpoint of the edge
    (spherical law of cosines); the sine from the volume, ``sin D =
    3 V |e| / (2 A_1 A_2)``.  Combining both with ``atan2`` keeps full
    precision near 0 and pi.
    """
    L = np.asarray(lengths, dtype=float)
    vol = np.sqrt(np.maximum(cayley_menger(L), 0.0) / 288.0)
    out = np.empty(L.shape)

    def ln(i, j):
        return L[..., _PAIR_INDEX[(i, j)]]

    for k, (i, j) in enumerate(TET_EDGES):
        p, q = [m for m in range(4) if m not in (i, j)]
        # corner angles at vertex i
        ca = _cos_angle(ln(i, j), ln(i, p), ln(j, p))
        cb = _cos_angle(ln(i, j), ln(i, q), ln(j, q))
        cc = _cos_angle(ln(i, p), ln(i, q), ln(p, q))
        sa = np.sqrt(np.maximum(1 - ca * ca, 0.0))
        sb = np.sqrt(np.maximum(1 - cb * cb, 0.0))
        cosD = (cc - ca * cb) / (sa * sb)
        A1 = _area(ln(i, j), ln(i, p), ln(j, p))
        A2 = _area(ln(i, j), ln(i, q), ln(j, q))
        sinD = 3.0 * vol * ln(i, j) / (2.0 * A1 * A2)
        out[..., k] = np.arctan2(sinD, cosD)
    return out


def default_delta(surface, factor=0.5):
    """Layer thickness: ``factor`` times the mean edge length."""
    return factor * float(np.mean(surface.lengths))


def offset_vertices(cache, sampling, delta, side):
    """Endpoints of geodesics of length ``delta`` along ``side`` times the normals."""
    return np.array([
        cache.shoot(p, side * n, delta) for p, n in zip(sampling.points, sampling.normals)
    ])


def _split_keys(sampling):
    """Per-corner order keys from the lifted positions.

    A linear function of position is invariant under the periodic
    translations up to a common shift, so adjacent prisms agree on the
    order of their shared vertices even across a seam.
    """
    P = sampling.points[sampling.surface.triangles] + sampling.lifts
    return np.round(P @ SPLIT_DIRECTION, 9)


def build_layers(metric, sampling, delta=None, cache=None, reverse=False, offsets=None):
    """Build the layered complexes on both sides of a sampled surface.

    Offset vertices are found by shooting geodesics of length ``delta``
    along the positive and negative unit normals.  Every tetrahedron edge
    gets the geodesic distance between its endpoints.

    Parameters
    ----------
    reverse : bool
        Use the opposite corner order for the prism splits.
    offsets : tuple of ndarray, optional
        Precomputed (+, -) offset vertices, to share between splits.

    Returns
    -------
    (LayeredComplex, LayeredComplex)
        The positive and negative sides.

    Raises
    ------
    DegenerateTetrahedron
        If some tetrahedron's lengths admit no Euclidean realization.
    """
    s = sampling.surface
    if delta is None:
        delta = default_delta(s)
    cache = cache if cache is not None else GeodesicCache(metric)
    split_keys = _split_keys(sampling)
    layers = []
    for n_side, side in enumerate((1, -1)):
        off = offsets[n_side] if offsets is not None else offset_vertices(cache, sampling, delta, side)
        tets, tri_of, ends = [], [], []
        for t, tri in enumerate(s.triangles):
            corner = {int(v): k for k, v in enumerate(tri)}
            for tet in prism_tets(tri, reverse, split_keys[t]):
                tets.append(tet)
                tri_of.append(t)
                pos = []
                for v, level in tet:
                    base = sampling.points[v] if level == 0 else off[v]
                    pos.append(base + sampling.lifts[t, corner[v]])
                ends.extend((pos[i], pos[j]) for i, j in TET_EDGES)
        ends = np.array(ends)
        lengths = cache.distances(ends[:, 0], ends[:, 1]).reshape(-1, 6)
        cm = cayley_menger(lengths)
        scale = np.max(lengths, axis=1) ** 6
        bad = np.nonzero(cm <= 1e-12 * scale)[0]
        if len(bad):
            raise DegenerateTetrahedron(tets[bad[0]])
        layers.append(
            LayeredComplex(s, side, off, np.array(tets), lengths, np.array(tri_of))
        )
    return tuple(layers)


def wedge_angles(layer):
    """Sum of dihedral angles at each surface edge over the layer's tetrahedra."""
    s = layer.surface
    theta = np.zeros(s.n_edges)
    D = dihedral_angles(layer.lengths)
    for tet, dih in zip(layer.tets, D):
        for k, (i, j) in enumerate(TET_EDGES):
            (a, la), (b, lb) = tet[i], tet[j]
            if la == 0 and lb == 0:
                theta[s.edge_id(a, b)] += dih[k]
    return theta


def hinge_angles_from_layers(surface, plus, minus):
    """Hinge angles ``(Theta_- - Theta_+)/2`` from the two layers.

    ``Theta_s`` is the total dihedral angle at an edge on side s.  Boundary
    edges get NaN.
    """
    phi = 0.5 * (wedge_angles(minus) - wedge_angles(plus))
    for e in surface.boundary_edges:
        phi[e] = np.nan
    return HingeField(phi, LAYERED)


def layered_hinge_angles(metric, sampling, delta=None, cache=None, symmetric=True):
    """Hinge angles of a sampled surface from its two layers.

    With ``symmetric`` the angles are averaged over the two opposite
    global split orders, so that every quadrilateral side of a prism is
    cut along both diagonals once.  A single split leaves a bias of first
    order in the edge length; the average cancels it.
    """
    s = sampling.surface
    if delta is None:
        delta = default_delta(s)
    cache = cache if cache is not None else GeodesicCache(metric)
    offsets = tuple(offset_vertices(cache, sampling, delta, side) for side in (1, -1))
    fields = []
    for reverse in ((False, True) if symmetric else (False,)):
        plus, minus = build_layers(metric, sampling, delta, cache, reverse, offsets)
        fields.append(hinge_angles_from_layers(s, plus, minus).values)
    return HingeField(np.mean(fields, axis=0), LAYERED)
