"""Convergence studies against smooth reference curvature.

* Euclidean suite: layered triangulations of the radial surfaces, comparing
  hinge-angle mean curvature, the cotan formula, hinge-angle directed
  curvature and the normal-cycle tensor.
* Gowdy suite: rectangular and skew grids on the tilted plane, with hinge
  angles from the two 3D layers.

Resolutions run in separate processes when ``PFCURV_THREADS`` (or the
``workers`` argument) is above one.  Results do not depend on it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .baselines import cotan_mean_curvature, csm_tensor
from .curvature import directed_curvatures, hinge_regions, mean_curvature
from .dual import build_dual
from .embedding import hinge_angle_stats, hinge_angles_euclidean
from .generators import LAYER_COUNTS, generate_gowdy_grids, generate_layered_surface
from .layers import layered_hinge_angles
from .report import (
    CurvatureReport, MethodRecords, write_edge_csv, write_principal_csv, write_profile_csv,
    write_stats_csv, write_summary_csv, write_vertex_csv,
)

GOWDY_BLOCKS = (6, 12, 24, 48)
DUAL_CHOICES = ("voronoi", "barycentric", "mixed")


def worker_count(workers=None):
    """Number of worker processes: argument, else ``PFCURV_THREADS``, else 1."""
    if workers is None:
        try:
            workers = int(os.environ.get("PFCURV_THREADS", "1"))
        except ValueError:
            workers = 1
    return max(1, int(workers))


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def make_dual(surface, kind):
    """Dual tessellation by CLI name: voronoi (strict), barycentric, mixed."""
    if kind == "mixed":
        return build_dual(surface, "voronoi", mixed=True)
    if kind == "voronoi":
        return build_dual(surface, "voronoi", mixed=False)
    if kind == "barycentric":
        return build_dual(surface, "barycentric")
    raise ValueError(f"unknown dual kind {kind!r}; expected one of {DUAL_CHOICES}")


def _directed(surface, phi, dual):
    regions = hinge_regions(surface, dual)
    kappa = directed_curvatures(surface, phi, regions=regions)
    area = np.array([np.nan if r is None else r.area for r in regions])
    count = np.array([0 if r is None else r.theta_count for r in regions])
    return kappa, area, count


# -- Euclidean ---------------------------------------------------------


def euclidean_report(name, layers, dual_kind="mixed", rescale_area=False):
    """All four estimators on one layered mesh of a radial surface.

    With ``rescale_area`` the piecewise flat surface is scaled by
    ``lambda = sqrt(A_smooth / A_mesh)`` so that its area matches the smooth
    surface.  This divides the hinge-angle estimates (mean, directed and the
    tensor sum) by lambda.  The cotan formula is evaluated on the vertex
    positions as sampled and is not affected.
    """
    mesh = generate_layered_surface(name, layers)
    s, emb, smooth = mesh.surface, mesh.embedded, mesh.smooth
    area_smooth, denominator = smooth.area_statistics()
    lam = math.sqrt(area_smooth / s.total_area()) if rescale_area else 1.0
    phi = hinge_angles_euclidean(emb)
    dual = make_dual(s, dual_kind)
    pts = emb.positions
    hmean, hmax = hinge_angle_stats(phi)
    rep = CurvatureReport(
        name, layers, (s.n_vertices, s.n_edges, s.n_triangles), denominator, hmean, hmax,
        meta={"scale": lam, "dual": dual_kind, "area_smooth": area_smooth,
              "area_mesh": s.total_area()},
    )
    vid = np.arange(s.n_vertices)
    H_smooth = smooth.mean_curvature(pts)
    rep.add(MethodRecords("pf-mean", "vertex", vid, mean_curvature(s, phi, dual) / lam,
                          H_smooth, dual.areas.copy()))
    Hc, _ = cotan_mean_curvature(emb, dual)
    rep.add(MethodRecords("cotan", "vertex", vid, Hc, H_smooth, dual.areas.copy()))
    kappa, area, count = _directed(s, phi, dual)
    mid, tan = smooth.geodesic_midpoints(pts[s.edges[:, 0]], pts[s.edges[:, 1]])
    k_smooth = smooth.directional_curvature(mid, smooth.crossing_direction(mid, tan))
    rep.add(MethodRecords("pf-directed", "edge", np.arange(s.n_edges), kappa / lam, k_smooth,
                          area, theta_count=count))
    csm = csm_tensor(emb, dual, phi)
    rep.add(MethodRecords("csm", "vertex", vid, csm.principal / lam,
                          smooth.principal_curvatures(pts), csm.areas))
    return rep


def run_euclidean_suite(name, layers=LAYER_COUNTS, dual_kind="mixed", rescale_area=False,
                        out=None, workers=None, plots=True):
    """Run every resolution of one surface; optionally write CSV and SVG.

    Files written to ``out``: ``table2.csv`` (one row per resolution),
    ``stats.csv``, per-mesh ``<name>-L<layers>-vertices.csv``,
    ``-edges.csv`` and ``-principal.csv``, and ``<name>-errors.svg``.
    """
    jobs = [(name, int(L), dual_kind, rescale_area) for L in layers]
    reports = _map(euclidean_report, jobs, worker_count(workers))
    if out is not None:
        write_euclidean_outputs(reports, out, plots=plots)
    return reports


def write_euclidean_outputs(reports, out, plots=True):
    os.makedirs(out, exist_ok=True)
    write_summary_csv(reports, os.path.join(out, "table2.csv"))
    write_stats_csv(reports, os.path.join(out, "stats.csv"))
    for r in reports:
        stem = os.path.join(out, f"{r.surface}-L{r.resolution}")
        write_vertex_csv(r, stem + "-vertices.csv")
        write_edge_csv(r, stem + "-edges.csv")
        write_principal_csv(r, stem + "-principal.csv")
    if plots:
        from .plotting import plot_error_vs_hinge
        names = sorted({r.surface for r in reports})
        for n in names:
            plot_error_vs_hinge([r for r in reports if r.surface == n],
                                os.path.join(out, f"{n}-errors.svg"))


# -- Gowdy -------------------------------------------------------------


def gowdy_denominator(smooth, samples=4096):
    """Mean |principal curvature| of the tilted plane over one z-period.

    The plane is homogeneous in x and y and its parameter t is linear in z,
    so the area average is a uniform average in z.
    """
    z = (np.arange(samples) + 0.5) * (2 * math.pi / samples)
    X = smooth.point(np.zeros_like(z), 3.0 * z / math.pi)  # z = t pi / 3
    return float(np.abs(smooth.principal_curvatures(X)).mean())


def gowdy_report(kind, blocks, delta=None, columns=4, symmetric=True):
    """Mean and directed curvature on one Gowdy grid.

    Parameters
    ----------
    kind : {"rect", "rectangular", "skew"}
    blocks : int
    delta : float, optional
        Layer thickness; default half the mean edge length.
    symmetric : bool
        Average hinge angles over both global prism-split orders.
    """
    grid = generate_gowdy_grids(kind, blocks, columns=columns)
    smooth, s = grid.smooth, grid.surface
    phi = layered_hinge_angles(smooth.metric, grid.sampling, delta, grid.cache, symmetric=symmetric)
    dual = build_dual(s, grid.dual_kind)
    pts = grid.sampling.points
    hmean, hmax = hinge_angle_stats(phi)
    rep = CurvatureReport(
        f"gowdy-{grid.kind}", blocks, (s.n_vertices, s.n_edges, s.n_triangles),
        gowdy_denominator(smooth), hmean, hmax,
        meta={"kind": grid.kind, "dual": grid.dual_kind, "columns": columns,
              "delta": delta, "hinges": phi.values, "edge_type": grid.edge_type},
    )
    rep.add(MethodRecords("pf-mean", "vertex", np.arange(s.n_vertices),
                          mean_curvature(s, phi, dual), smooth.mean_curvature(pts),
                          dual.areas.copy(), position=pts[:, 2].copy()))
    kappa, area, count = _directed(s, phi, dual)
    mid, tan = smooth.geodesic_midpoints(grid.edge_ends[:, 0], grid.edge_ends[:, 1])
    k_smooth = smooth.directional_curvature(mid, smooth.crossing_direction(mid, tan))
    rep.add(MethodRecords("pf-directed", "edge", np.arange(s.n_edges), kappa, k_smooth, area,
                          position=mid[:, 2].copy(), theta_count=count,
                          edge_type=grid.edge_type.copy()))
    return rep


def edge_type_percent(report, etype, method="pf-directed"):
    """Percentage error of the directed curvature over one edge type."""
    rec = report.records[method]
    m = rec.edge_type == etype
    return 100.0 * float(np.abs(rec.error[m]).mean()) / report.denominator


def run_gowdy_suite(kinds=("rect", "skew"), blocks=GOWDY_BLOCKS, delta=None, out=None,
                    workers=None, columns=4, plots=True):
    """Run the Gowdy grids; optionally write ``table3.csv``, profiles and SVG."""
    jobs = [(k, int(b), delta, columns) for k in kinds for b in blocks]
    reports = _map(gowdy_report, jobs, worker_count(workers))
    if out is not None:
        write_gowdy_outputs(reports, out, plots=plots)
    return reports


def write_gowdy_outputs(reports, out, plots=True):
    os.makedirs(out, exist_ok=True)
    write_summary_csv(reports, os.path.join(out, "table3.csv"), resolution_label="blocks")
    write_stats_csv(reports, os.path.join(out, "stats.csv"))
    for r in reports:
        stem = os.path.join(out, f"{r.surface}-B{r.resolution}")
        write_vertex_csv(r, stem + "-vertices.csv", methods=("pf-mean",))
        write_edge_csv(r, stem + "-edges.csv")
        write_profile_csv(r, stem + "-profile.csv")
    if plots:
        from .plotting import plot_error_vs_hinge, plot_gowdy_profiles
        for kind in sorted({r.surface for r in reports}):
            sel = [r for r in reports if r.surface == kind]
            plot_error_vs_hinge(sel, os.path.join(out, f"{kind}-errors.svg"))
            plot_gowdy_profiles(sel, os.path.join(out, f"{kind}-profiles.svg"))
