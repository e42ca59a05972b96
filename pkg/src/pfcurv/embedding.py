"""Surfaces realized by vertex positions in Euclidean 3-space, and hinge angles."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHinge, MeshError
from .surface import SimplicialSurface, edges_from_triangles

EUCLIDEAN = "euclidean-normals"
LAYERED = "layer-average"


class EmbeddedSurface:
    """A :class:`SimplicialSurface` with vertex positions in E^3.

    Parameters
    ----------
    surface : SimplicialSurface
    positions : array_like, shape (V, 3)
    lifts : array_like, shape (F, 3, 3), optional
        Per-corner translations for periodic surfaces.  Corner k of triangle t
        sits at ``positions[triangles[t, k]] + lifts[t, k]``; the translations
        must be isometries of the ambient space (here: any translation).
    check : bool
        Verify that stored lengths match the positions (1e-12 relative).
    """

    def __init__(self, surface, positions, lifts=None, check=True):
        self.surface = surface
        self.positions = np.asarray(positions, dtype=float).reshape(-1, 3)
        if len(self.positions) != surface.n_vertices:
            raise MeshError("one position per vertex is required")
        F = surface.n_triangles
        self.lifts = np.zeros((F, 3, 3)) if lifts is None else np.asarray(lifts, dtype=float)
        if check:
            L = corner_edge_lengths(self.triangle_points())
            ref = surface.triangle_lengths
            if not np.allclose(L, ref, rtol=1e-12, atol=0.0):
                raise MeshError("stored edge lengths disagree with positions")

    def triangle_points(self):
        """(F, 3, 3) corner positions including periodic lifts."""
        return self.positions[self.surface.triangles] + self.lifts

    def triangle_normals(self):
        P = self.triangle_points()
        n = np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])
        return n / np.linalg.norm(n, axis=1, keepdims=True)

    def triangle_area_vectors(self):
        P = self.triangle_points()
        return 0.5 * np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])

    def vertex_normals(self):
        """Area-weighted average of incident triangle normals."""
        n = np.zeros((self.surface.n_vertices, 3))
        A = self.triangle_area_vectors()
        for k in range(3):
            np.add.at(n, self.surface.triangles[:, k], A)
        return n / np.linalg.norm(n, axis=1, keepdims=True)

    def flipped(self):
        """Same surface with every triangle's orientation reversed."""
        s = self.surface
        tris = s.triangles[:, ::-1]
        flipped = SimplicialSurface(s.n_vertices, s.edges, s.lengths, tris)
        return EmbeddedSurface(flipped, self.positions, self.lifts[:, ::-1], check=False)

    def transformed(self, rotation, translation):
        """Rigid motion x -> R x + t (lifts rotate with the surface)."""
        R = np.asarray(rotation, dtype=float)
        pos = self.positions @ R.T + np.asarray(translation, dtype=float)
        return EmbeddedSurface(self.surface, pos, self.lifts @ R.T, check=False)


def corner_edge_lengths(P):
    """(F, 3) side lengths; column k is opposite corner k."""
    return np.stack(
        [
            np.linalg.norm(P[:, 2] - P[:, 1], axis=1),
            np.linalg.norm(P[:, 0] - P[:, 2], axis=1),
            np.linalg.norm(P[:, 1] - P[:, 0], axis=1),
        ],
        axis=1,
    )


def embed(positions, triangles, lifts=None):
    """Build an :class:`EmbeddedSurface` whose edge lengths come from positions."""
    positions = np.asarray(positions, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)
    edges = edges_from_triangles(triangles)
    F = len(triangles)
    lifts = np.zeros((F, 3, 3)) if lifts is None else np.asarray(lifts, dtype=float)
    P = positions[triangles] + lifts
    lengths = np.full(len(edges), np.nan)
    index = {tuple(e): i for i, e in enumerate(edges.tolist())}
    for t, tri in enumerate(triangles.tolist()):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            i = index[(a, b) if a < b else (b, a)]
            if np.isnan(lengths[i]):
                lengths[i] = np.linalg.norm(P[t, (k + 1) % 3] - P[t, k])
    surface = SimplicialSurface(len(positions), edges, lengths, triangles)
    return EmbeddedSurface(surface, positions, lifts, check=False)


@dataclass
class HingeField:
    """Signed hinge angle per edge.

    ``values[e]`` is NaN on boundary edges.  Positive means the two triangles
    are concave on the side their orientation normal points to.
    """

    values: np.ndarray
    provenance: str

    def __len__(self):
        return len(self.values)

    def scaled(self, factor):
        return HingeField(self.values * factor, self.provenance)


def hinge_angles_euclidean(embedded, degenerate_tol=1e-9):
    """Signed angles between adjacent triangle normals.

    The sign is positive when the far vertex of the second triangle lies on
    the positive side of the first triangle's plane, i.e. when the dihedral
    wedge on the positive-orientation side exceeds pi.
    """
    s = embedded.surface
    P = embedded.triangle_points()
    N = embedded.triangle_normals()
    phi = np.full(s.n_edges, np.nan)
    for e, ts in enumerate(s.edge_triangles):
        if len(ts) != 2:
            continue
        ta, tb = ts
        na, nb = N[ta], N[tb]
        c = float(np.dot(na, nb))
        if c < -1.0 + degenerate_tol:
            raise DegenerateHinge(e)
        u, v = s.edges[e]
        ka_u = int(np.nonzero(s.triangles[ta] == u)[0][0])
        kb_u = int(np.nonzero(s.triangles[tb] == u)[0][0])
        kb_w = int(np.nonzero((s.triangles[tb] != u) & (s.triangles[tb] != v))[0][0])
        ka_w = int(np.nonzero((s.triangles[ta] != u) & (s.triangles[ta] != v))[0][0])
        sn = np.linalg.norm(np.cross(na, nb))
        angle = np.arctan2(sn, c)
        # translation-invariant side test, symmetrised over both triangles
        side = np.dot(na, P[tb, kb_w] - P[tb, kb_u]) + np.dot(nb, P[ta, ka_w] - P[ta, ka_u])
        phi[e] = angle if side > 0 else -angle
    return HingeField(phi, EUCLIDEAN)


def hinge_angle_stats(field):
    """(mean |phi|, max |phi|) over interior hinges, in degrees."""
    a = np.abs(np.asarray(field.values if isinstance(field, HingeField) else field, dtype=float))
    a = a[np.isfinite(a)]
    return float(np.degrees(a.mean())), float(np.degrees(a.max()))


# -- OFF files ---------------------------------------------------------


def write_off(embedded, path):
    s = embedded.surface
    if np.any(embedded.lifts != 0):
        raise MeshError("periodic surfaces cannot be written as OFF")
    lines = ["OFF", f"{s.n_vertices} {s.n_triangles} {s.n_edges}"]
    lines += [" ".join(repr(float(x)) for x in p) for p in embedded.positions]
    lines += [f"3 {a} {b} {c}" for a, b, c in s.triangles.tolist()]
    with open(os.fspath(path), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_off(path):
    """Read a triangle-only OFF file; edge lengths come from the positions."""
    with open(os.fspath(path)) as fh:
        tokens = []
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                tokens.append(line.split())
    head = tokens[0]
    if head[0] != "OFF":
        raise MeshError("missing OFF header")
    counts = head[1:] if len(head) > 1 else tokens.pop(1)
    V, F = int(counts[0]), int(counts[1])
    body = tokens[1:]
    pos = np.array([[float(x) for x in row[:3]] for row in body[:V]])
    tris = []
    for row in body[V:V + F]:
        if int(row[0]) != 3:
            raise MeshError("only triangular faces are supported")
        tris.append([int(x) for x in row[1:4]])
    return embed(pos, np.array(tris))
