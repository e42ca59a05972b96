"""Exception types raised by pfcurv."""


class PFCurvError(Exception):
    """Base class for all pfcurv errors."""


class MeshError(PFCurvError, ValueError):
    """Invalid simplicial input."""


class TriangleInequalityViolated(MeshError):
    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(f"triangle {triangle} violates the strict triangle inequality")


class NonManifoldEdge(MeshError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge} borders more than two triangles")


class InconsistentOrientation(MeshError):
    def __init__(self, edge=None):
        self.edge = edge
        msg = "triangle orientations are not globally consistent"
        if edge is not None:
            msg += f" (edge {edge})"
        super().__init__(msg)


class OpenFan(PFCurvError):
    """Fan development around a boundary vertex.

    The partial development is attached as ``development``.
    """

    def __init__(self, vertex, development=None):
        self.vertex = vertex
        self.development = development
        super().__init__(f"vertex {vertex} lies on the boundary; its fan is open")


class BoundaryHinge(PFCurvError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge} is a boundary edge; hinge regions need interior edges")


class NotDelaunay(PFCurvError):
    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(f"circumcenter of triangle {triangle} lies outside it")


class DegenerateHinge(PFCurvError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"normals at edge {edge} are antiparallel")


class DegenerateTetrahedron(PFCurvError):
    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        super().__init__(
            f"tetrahedron {self.vertices} has no Euclidean realization (try a smaller delta)"
        )


class EmptyRegion(PFCurvError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"hinge region of edge {edge} has zero area")


class StepFailure(PFCurvError):
    """Geodesic integrator could not meet its tolerance."""


class NoConvergence(PFCurvError):
    """Geodesic boundary-value solve did not converge."""


class UnknownSurface(PFCurvError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown surface {name!r}")

    def __str__(self):
        return self.args[0]


class UnsupportedLayerCount(PFCurvError, ValueError):
    def __init__(self, layers):
        self.layers = layers
        super().__init__(f"unsupported layer count {layers}; expected L >= 6 with L = 2 mod 4 (6, 10, 14, 18, 22, ...)")
