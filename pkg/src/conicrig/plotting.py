"""Edge drawings of frameworks (2D directly, 3D by orthographic projection)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection
import numpy as np

from .framework import Framework

# viewing direction for 3D frameworks (points toward the viewer)
DEFAULT_VIEW = (1.0, -1.5, 1.2)


def projection_basis(view=DEFAULT_VIEW) -> np.ndarray:
    """3 x 2 orthonormal basis of the screen plane; screen y follows the z axis."""
    w = np.asarray(view, dtype=float)
    w /= np.linalg.norm(w)
    up = np.array([0.0, 0.0, 1.0]) - w[2] * w
    if np.linalg.norm(up) < 1e-9:
        up = np.array([0.0, 1.0, 0.0]) - w[1] * w
    up /= np.linalg.norm(up)
    right = np.cross(up, w)
    return np.column_stack([right, up])


def planar_coords(f: Framework, view=DEFAULT_VIEW) -> np.ndarray:
    if f.d == 1:
        return np.column_stack([f.points[:, 0], np.zeros(f.n)])
    if f.d == 2:
        return f.points.copy()
    if f.d == 3:
        return f.points @ projection_basis(view)
    raise ValueError("only frameworks in dimension 1, 2 or 3 can be drawn")


def draw_framework(f: Framework, path, title: str = None, view=DEFAULT_VIEW,
                   highlight=None, width: float = 5.0):
    """Render the framework's bars and joints and save to ``path`` (format from suffix)."""
    xy = planar_coords(f, view)
    fig, ax = plt.subplots(figsize=(width, width))
    segs = [xy[[i, j]] for i, j in f.edges]
    ax.add_collection(LineCollection(segs, colors="0.25", linewidths=1.4, zorder=1))
    colors = ["C3" if highlight is not None and i in highlight else "C0" for i in range(f.n)]
    ax.scatter(xy[:, 0], xy[:, 1], s=28, c=colors, zorder=2)
    for i, (x, y) in enumerate(xy):
        ax.annotate(str(i), (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_aspect("equal", adjustable="datalim")
    ax.autoscale_view()
    ax.margins(0.1)
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
