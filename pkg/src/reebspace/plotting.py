"""Figures of the range: singular arrangement and sheet images."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Polygon

from .geometry import PSEUDO_SINGULAR
from .reeb import ReebSpaceResult


def _xy(p, scale):
    return float(p[0]) / scale, float(p[1]) / scale


def plot_arrangement(result: ReebSpaceResult, ax=None, regular_mesh=None):
    """Arrangement segments, pseudo-singular ones dashed; optionally the regular segments in grey."""
    if ax is None:
        _, ax = plt.subplots(figsize=(6, 6))
    arr, s = result.arrangement, result.scale
    if regular_mesh is not None:
        arranged = {seg.edge for seg in arr.segments}
        pts = regular_mesh.ipoints
        for e, (a, b) in enumerate(regular_mesh.edges):
            if e not in arranged:
                (x0, y0), (x1, y1) = _xy(pts[a], s), _xy(pts[b], s)
                ax.plot([x0, x1], [y0, y1], color="0.8", lw=0.4, zorder=1)
    for seg in arr.segments:
        (x0, y0), (x1, y1) = _xy(seg.p, s), _xy(seg.q, s)
        style = "--" if seg.kind == PSEUDO_SINGULAR else "-"
        ax.plot([x0, x1], [y0, y1], style, color="k", lw=1.2, zorder=3)
    ax.set_aspect("equal")
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(f"bounded faces: {len(arr.bounded_faces())}, segment crossings: {arr.intersection_count}")
    return ax


def plot_sheets(result: ReebSpaceResult, ax=None, alpha=0.35):
    """Sheet images overlaid in the range, one colour per sheet."""
    if ax is None:
        _, ax = plt.subplots(figsize=(6, 6))
    arr, s = result.arrangement, result.scale
    cmap = plt.get_cmap("tab20")
    for sheet in result.sheets:
        color = cmap(sheet.id % 20)
        for f, _ in sheet.faces:
            poly = [_xy(p, s) for p in arr.face_polygon(f)]
            ax.add_patch(Polygon(poly, closed=True, facecolor=color, edgecolor="none", alpha=alpha))
    for seg in arr.segments:
        (x0, y0), (x1, y1) = _xy(seg.p, s), _xy(seg.q, s)
        ax.plot([x0, x1], [y0, y1], color="k", lw=0.6)
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(f"sheets: {result.sheet_count} ({result.algorithm})")
    return ax


def plot_sheet_areas(result: ReebSpaceResult, ax=None):
    if ax is None:
        _, ax = plt.subplots(figsize=(6, 3))
    areas = [float(x.area) for x in result.sheets]
    ax.bar(range(len(areas)), areas, color="0.4")
    ax.set_xlabel("sheet")
    ax.set_ylabel("area")
    return ax


def save_figures(result: ReebSpaceResult, outdir, mesh=None) -> list[str]:
    """Write arrangement, sheets and area figures as PNG files; returns their paths."""
    paths = []
    for name, draw in (
        ("arrangement.png", lambda ax: plot_arrangement(result, ax, mesh)),
        ("sheets.png", lambda ax: plot_sheets(result, ax)),
        ("sheet_areas.png", lambda ax: plot_sheet_areas(result, ax)),
    ):
        fig, ax = plt.subplots(figsize=(6, 3) if name == "sheet_areas.png" else (6, 6))
        draw(ax)
        fig.tight_layout()
        path = f"{outdir}/{name}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths
