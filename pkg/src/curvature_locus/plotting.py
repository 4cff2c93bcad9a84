"""Matplotlib figures: the locus surface and the (g, c) region map."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .locus_geometry import DEFAULT_HEIGHT, mesh_arrays  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 10,
    "axes.titlesize": 11,
    "axes.linewidth": 0.8,
    "figure.dpi": 110,
}
COUNT_COLORS = {2: "#0C5DA5", 4: "#F2AD00", 6: "#B40F20"}


def _tidy(ax):
    for spine in ("top", "right"):
        if spine in ax.spines:
            ax.spines[spine].set_visible(False)
    ax.tick_params(direction="out", length=3, width=0.7)


def plot_locus(obj, path, case: str = "sphere", samples: int = 64, height: float = DEFAULT_HEIGHT, points=(), title=None):
    """Shaded surface of the locus; ``points`` are images of singular directions to mark."""
    plt.rcParams.update(STYLE)
    verts, faces = mesh_arrays(obj, case, samples, height)
    tri = np.array(faces) - 1
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_trisurf(verts[:, 0], verts[:, 1], verts[:, 2], triangles=tri, color="#5BBCD6", alpha=0.55, linewidth=0.1, edgecolor="0.35")
    if len(points):
        p = np.asarray(points, dtype=float)
        ax.scatter(p[:, 0], p[:, 1], p[:, 2], color="#B40F20", s=28, depthshade=False)
    ax.set_xlabel("$\\nu_1$")
    ax.set_ylabel("$\\nu_2$")
    ax.set_zlabel("$\\nu_3$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_abc_regions(records, path, title="predicted real singular directions"):
    """Scatter of (g, c) grid points coloured by predicted count, observed mismatches circled.

    ``records`` holds (c, g, predicted, observed) tuples.
    """
    plt.rcParams.update(STYLE)
    fig, ax = plt.subplots(figsize=(5, 4.2))
    for count, color in COUNT_COLORS.items():
        pts = [(float(g), float(c)) for c, g, pred, _ in records if pred == count]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=14, color=color, label=f"{count} real")
    bad = [(float(g), float(c)) for c, g, pred, obs in records if obs is not None and obs != pred]
    if bad:
        xs, ys = zip(*bad)
        ax.scatter(xs, ys, s=60, facecolors="none", edgecolors="k", label="mismatch")
    gs = np.linspace(-2, 2, 400)
    ax.plot(gs, -9 * gs**2, color="0.3", lw=0.8, ls="--", label="$c=-9g^2$")
    ax.plot(gs, 1 - 6 * gs, color="0.55", lw=0.8, ls=":", label="$c=1-6g$")
    ax.axhline(-1, color="0.5", lw=0.6)
    ax.axvline(1 / 3, color="0.5", lw=0.6)
    ax.set_xlim(-2.1, 2.1)
    ax.set_ylim(-2.1, 2.1)
    ax.set_xlabel("g")
    ax.set_ylabel("c")
    ax.set_title(title)
    ax.legend(fontsize=7, frameon=False, loc="lower left")
    _tidy(ax)
    fig.tight_layout()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_census(rows, path):
    """Bar chart of how many orbit rows saw each locus kind."""
    plt.rcParams.update(STYLE)
    counts = {}
    for row in rows:
        for kind in row.get("census", ()):
            counts[kind] = counts.get(kind, 0) + 1
    kinds = sorted(counts)
    fig, ax = plt.subplots(figsize=(5.5, 3))
    ax.bar(range(len(kinds)), [counts[k] for k in kinds], color="#0C5DA5")
    ax.set_xticks(range(len(kinds)))
    ax.set_xticklabels(kinds, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("orbit rows")
    _tidy(ax)
    fig.tight_layout()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path
