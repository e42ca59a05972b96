"""SVG figures for the convergence studies (matplotlib, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed metadata keeps the SVG output byte-identical between runs
_SVG_META = {"Date": None, "Creator": None}
plt.rcParams["svg.hashsalt"] = "pfcurv"

_STYLE = {
    "pf-mean": ("o", "C0"),
    "cotan": ("s", "C1"),
    "pf-directed": ("^", "C2"),
    "csm": ("D", "C3"),
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_error_vs_hinge(reports, path):
    """Mean absolute error against mean absolute hinge angle, log-log.

    One series per method; error bars show the standard deviation of the
    absolute errors.
    """
    reports = sorted(reports, key=lambda r: r.hinge_mean_deg)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    methods = []
    for r in reports:
        methods += [m for m in r.methods() if m not in methods]
    x = np.array([r.hinge_mean_deg for r in reports])
    for m in methods:
        sel = [r for r in reports if m in r.records]
        xs = np.array([r.hinge_mean_deg for r in sel])
        stats = [r.summary(m) for r in sel]
        y = np.array([s["mean_abs_error"] for s in stats])
        err = np.array([s["std_abs_error"] for s in stats])
        marker, colour = _STYLE.get(m, ("x", "k"))
        # clip the lower bar so it stays on the log axis
        lower = np.minimum(err, 0.9 * y)
        ax.errorbar(xs, y, yerr=np.vstack([lower, err]), marker=marker, color=colour, capsize=3, label=m)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("mean |hinge angle| (degrees)")
    ax.set_ylabel("mean |error|")
    if len(x):
        ax.set_title(reports[0].surface)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_gowdy_profiles(reports, path):
    """Mean curvature and directed curvature per edge type against z."""
    reports = sorted(reports, key=lambda r: r.resolution)
    fig, axes = plt.subplots(2, 2, figsize=(9, 7), sharex=True)
    panels = [("pf-mean", None, "mean curvature")] + [
        ("pf-directed", t, f"directed curvature, {t} edges") for t in "abc"
    ]
    for ax, (method, etype, title) in zip(axes.ravel(), panels):
        ref_z = None
        for r in reports:
            rec = r.records.get(method)
            if rec is None:
                continue
            m = np.ones(len(rec.ids), bool) if etype is None else rec.edge_type == etype
            z, est, ref = rec.position[m], rec.estimate[m], rec.reference[m]
            order = np.argsort(z, kind="stable")
            z, est, ref = z[order], est[order], ref[order]
            # one value per height: the grid is homogeneous across columns
            zu, first = np.unique(np.round(z, 9), return_index=True)
            ax.plot(zu, est[first], marker=".", lw=1, label=f"{r.resolution} blocks")
            # smooth curve sampled at the finest grid's heights
            ref_z, ref_v = zu, ref[first]
        if ref_z is not None:
            ax.plot(ref_z, ref_v, "k--", lw=1, label="smooth")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("z")
    axes[0, 0].legend(fontsize="small")
    if reports:
        fig.suptitle(reports[0].surface)
    fig.tight_layout()
    _save(fig, path)


def plot_percent_table(rows, path, resolution_key, title=""):
    """Percentage errors against resolution from summary-CSV rows."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    surfaces = []
    for row in rows:
        if row["surface"] not in surfaces:
            surfaces.append(row["surface"])
    methods = [k[:-4] for k in rows[0] if k.endswith("_pct")] if rows else []
    for si, surf in enumerate(surfaces):
        sel = [r for r in rows if r["surface"] == surf]
        res = [r[resolution_key] for r in sel]
        for m in methods:
            vals = [r[f"{m}_pct"] for r in sel]
            if any(v is None for v in vals):
                continue
            marker, colour = _STYLE.get(m, ("x", "k"))
            ls = ["-", "--", ":", "-."][si % 4]
            ax.plot(res, vals, marker=marker, color=colour, ls=ls, label=f"{surf} {m}")
    ax.set_yscale("log")
    ax.set_xlabel(resolution_key)
    ax.set_ylabel("error (% of mean |principal curvature|)")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize="x-small")
    fig.tight_layout()
    _save(fig, path)
