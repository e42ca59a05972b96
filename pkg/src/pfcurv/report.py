"""Curvature reports: per-element records, error summaries, CSV output.

All CSV files are RFC-4180 with '.' decimals and floats written to 12
significant digits, so they diff cleanly between runs.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

METHODS = ("pf-mean", "cotan", "pf-directed", "csm")


def fmt(x):
    """Format a number for CSV output (12 significant digits)."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if np.isnan(x):
        return "nan"
    return f"{x:.12g}"


@dataclass
class MethodRecords:
    """Estimates of one method on one mesh.

    ``estimate`` and ``reference`` have shape (n,) or (n, 2) (principal
    pairs); ``ids`` are vertex or edge ids depending on ``element``.
    """

    method: str
    element: str
    ids: np.ndarray
    estimate: np.ndarray
    reference: np.ndarray
    area: np.ndarray
    position: np.ndarray = None
    theta_count: np.ndarray = None
    edge_type: np.ndarray = None

    @property
    def error(self):
        return self.estimate - self.reference

    def abs_errors(self):
        e = np.abs(self.error).ravel()
        return e[np.isfinite(e)]


@dataclass
class CurvatureReport:
    """Everything computed for one mesh.

    ``denominator`` is the mean absolute principal curvature of the smooth
    surface; percentage errors are mean absolute errors relative to it.
    """

    surface: str
    resolution: int
    counts: tuple
    denominator: float
    hinge_mean_deg: float
    hinge_max_deg: float
    records: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add(self, rec):
        self.records[rec.method] = rec

    def summary(self, method):
        """Mean and standard deviation of |error|, and the percentage error."""
        e = self.records[method].abs_errors()
        mean = float(e.mean())
        return {
            "mean_abs_error": mean,
            "std_abs_error": float(e.std()),
            "percent": 100.0 * mean / self.denominator,
        }

    def percent(self, method):
        return self.summary(method)["percent"]

    def methods(self):
        return [m for m in METHODS if m in self.records] + [
            m for m in self.records if m not in METHODS
        ]


def _writer(path):
    fh = open(os.fspath(path), "w", newline="")
    return fh, csv.writer(fh, lineterminator="\r\n")


def write_summary_csv(reports, path, resolution_label="layers"):
    """One row per mesh with counts, hinge statistics and percentage errors."""
    methods = []
    for r in reports:
        methods += [m for m in r.methods() if m not in methods]
    fh, w = _writer(path)
    with fh:
        w.writerow(["surface", resolution_label, "V", "E", "F", "hinge_mean_deg", "hinge_max_deg"]
                   + [f"{m}_pct" for m in methods])
        for r in reports:
            w.writerow([r.surface, r.resolution, *r.counts, fmt(r.hinge_mean_deg), fmt(r.hinge_max_deg)]
                       + [fmt(r.percent(m)) if m in r.records else "" for m in methods])


def write_stats_csv(reports, path):
    """Long-format error statistics, one row per mesh and method."""
    fh, w = _writer(path)
    with fh:
        w.writerow(["surface", "resolution", "method", "mean_abs_error", "std_abs_error", "percent"])
        for r in reports:
            for m in r.methods():
                s = r.summary(m)
                w.writerow([r.surface, r.resolution, m, fmt(s["mean_abs_error"]),
                            fmt(s["std_abs_error"]), fmt(s["percent"])])


def write_vertex_csv(report, path, methods=("pf-mean", "cotan")):
    """``vertex_id,H_v,area,method`` rows for the vertex mean-curvature methods."""
    fh, w = _writer(path)
    with fh:
        w.writerow(["vertex_id", "H_v", "area", "method"])
        for m in methods:
            if m not in report.records:
                continue
            rec = report.records[m]
            for i, h, a in zip(rec.ids, rec.estimate, rec.area):
                w.writerow([fmt(i), fmt(h), fmt(a), m])


def write_edge_csv(report, path, method="pf-directed"):
    """``edge_id,kappa_h,area,theta_count,method`` rows."""
    rec = report.records[method]
    fh, w = _writer(path)
    with fh:
        w.writerow(["edge_id", "kappa_h", "area", "theta_count", "method"])
        for i, k, a, c in zip(rec.ids, rec.estimate, rec.area, rec.theta_count):
            w.writerow([fmt(i), fmt(k), fmt(a), fmt(c), method])


def write_principal_csv(report, path, method="csm"):
    """``vertex_id,k1,k2,area,method`` rows for tensor-based estimates."""
    rec = report.records[method]
    fh, w = _writer(path)
    with fh:
        w.writerow(["vertex_id", "k1", "k2", "area", "method"])
        for i, (k1, k2), a in zip(rec.ids, rec.estimate, rec.area):
            w.writerow([fmt(i), fmt(k1), fmt(k2), fmt(a), method])


def write_profile_csv(report, path):
    """Estimates and smooth values against the z coordinate (Gowdy grids).

    Columns: ``element,id,type,z,estimate,smooth,method``.  Vertex rows use
    the vertex height; edge rows the height of the geodesic midpoint.
    """
    fh, w = _writer(path)
    with fh:
        w.writerow(["element", "id", "type", "z", "estimate", "smooth", "method"])
        for m in report.methods():
            rec = report.records[m]
            if rec.position is None:
                continue
            types = rec.edge_type if rec.edge_type is not None else [""] * len(rec.ids)
            order = np.lexsort((rec.ids, rec.position))
            for k in order:
                w.writerow([rec.element, fmt(rec.ids[k]), str(types[k]), fmt(rec.position[k]),
                            fmt(rec.estimate[k]), fmt(rec.reference[k]), m])


def read_summary_csv(path):
    """Rows of a summary CSV as dicts with numeric fields converted."""
    with open(os.fspath(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        conv = {}
        for k, v in row.items():
            if k == "surface":
                conv[k] = v
            elif v == "":
                conv[k] = None
            else:
                conv[k] = float(v) if any(c in v for c in ".en") else int(v)
        out.append(conv)
    return out
