"""Reference estimators that need a Euclidean embedding.

* Cotan mean-curvature normal with mixed Voronoi areas.
* Anisotropic curvature tensor (normal-cycle tensor sum of hinge angles)
  averaged over each vertex's dual cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import hinge_angles_euclidean


def _cotangents(P):
    """(F, 3) cotangent of each corner angle of triangles P (F, 3, 3)."""
    out = np.empty(P.shape[:2])
    for k in range(3):
        u = P[:, (k + 1) % 3] - P[:, k]
        v = P[:, (k + 2) % 3] - P[:, k]
        out[:, k] = np.einsum("ij,ij->i", u, v) / np.linalg.norm(np.cross(u, v), axis=1)
    return out


def cotan_vectors(embedded):
    """Unnormalized cotan Laplacian ``sum_j (cot a + cot b)(x_i - x_j)`` per vertex."""
    s = embedded.surface
    P = embedded.triangle_points()
    cot = _cotangents(P)
    vec = np.zeros((s.n_vertices, 3))
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        d = (P[:, i] - P[:, j]) * cot[:, k, None]
        np.add.at(vec, s.triangles[:, i], d)
        np.add.at(vec, s.triangles[:, j], -d)
    return vec


def cotan_mean_curvature(embedded, dual):
    """Signed mean curvature and unit direction from the cotan formula.

    ``H n = (1 / 4A) sum_j (cot a + cot b)(x_i - x_j)``.  The sign follows
    the hinge-angle convention: H < 0 where the surface is convex toward
    its orientation normal.

    Returns
    -------
    H : ndarray, shape (V,)
    direction : ndarray, shape (V, 3)
        Unit mean-curvature normal (zero where H vanishes).
    """
    vec = cotan_vectors(embedded) / (4.0 * dual.areas[:, None])
    nv = embedded.vertex_normals()
    mag = np.linalg.norm(vec, axis=1)
    H = -np.einsum("ij,ij->i", vec, nv)
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(mag[:, None] > 0, vec / mag[:, None], 0.0)
    return H, direction


@dataclass
class VertexTensor3:
    """Averaged 3x3 curvature tensor of one vertex cell."""

    vertex: int
    matrix: np.ndarray
    area: float


@dataclass
class CSMResult:
    tensors: np.ndarray  # (V, 3, 3)
    areas: np.ndarray
    principal: np.ndarray  # (V, 2) ascending, tangent-plane eigenvalues
    directions: np.ndarray  # (V, 2, 3)

    def vertex(self, v):
        return VertexTensor3(int(v), self.tensors[v], float(self.areas[v]))


def csm_tensor(embedded, dual, hinges=None):
    """Normal-cycle curvature tensor averaged over each dual cell.

    Each edge adds ``|h cap B| / 2 * [(phi - sin phi) e+ e+ + (phi + sin phi)
    e- e-]`` to its endpoints' cells, where e+ bisects the two triangle
    normals and e- is orthogonal to e+ and the edge.  The sum is divided by
    the cell area.  Principal values come from the two eigenvectors furthest
    from the area-weighted vertex normal.
    """
    s = embedded.surface
    phi = (hinges if hinges is not None else hinge_angles_euclidean(embedded)).values
    phi = np.asarray(getattr(phi, "values", phi), dtype=float)
    N = embedded.triangle_normals()
    P = embedded.triangle_points()
    T = np.zeros((s.n_vertices, 3, 3))
    for e, ts in enumerate(s.edge_triangles):
        if len(ts) != 2 or not np.isfinite(phi[e]):
            continue
        ta, tb = ts
        u, v = s.edges[e]
        ka = list(s.triangles[ta]).index(u)
        kb = list(s.triangles[ta]).index(v)
        edge = P[ta, kb] - P[ta, ka]
        edge /= np.linalg.norm(edge)
        ep = N[ta] + N[tb]
        ep /= np.linalg.norm(ep)
        em = np.cross(ep, edge)
        em /= np.linalg.norm(em)
        f = phi[e]
        M = (f - np.sin(f)) * np.outer(ep, ep) + (f + np.sin(f)) * np.outer(em, em)
        T[u] += 0.5 * dual.splits[e, 0] * M
        T[v] += 0.5 * dual.splits[e, 1] * M
    T /= dual.areas[:, None, None]
    nv = embedded.vertex_normals()
    w, vec = np.linalg.eigh(T)
    drop = np.argmax(np.abs(np.einsum("vik,vi->vk", vec, nv)), axis=1)
    keep = np.array([[k for k in range(3) if k != d] for d in drop])
    r = np.arange(s.n_vertices)[:, None]
    vals = w[r, keep]
    dirs = np.swapaxes(vec, 1, 2)[r, keep]
    order = np.argsort(vals, axis=1)
    vals = np.take_along_axis(vals, order, axis=1)
    dirs = np.take_along_axis(dirs, order[..., None], axis=1)
    return CSMResult(T, dual.areas.copy(), vals, dirs)
