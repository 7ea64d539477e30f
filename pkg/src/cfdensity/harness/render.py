"""Static figures (matplotlib, Agg backend): domain point clouds and density histograms."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.tri import Triangulation  # noqa: E402

from ..geometry import normalize_sum  # noqa: E402
from .io import state_name  # noqa: E402
from .montecarlo import BINS_1D, TRI_DEPTH, DomainCloud, EmpiricalReport  # noqa: E402


def _grid(n, cols):
    rows = (n + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(4 * cols, 4 * rows), squeeze=False)
    for ax in axes.flat[n:]:
        ax.set_visible(False)
    return fig, list(axes.flat[:n])


def _simplex(ax):
    ax.plot([1, 0, 0, 1], [0, 1, 0, 0], color="0.6", lw=0.8)
    ax.set_aspect("equal")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("x0")
    ax.set_ylabel("x1")


def domains_figure(cloud: DomainCloud, dim: int, assign=None):
    """Scatter of each state's cloud on the chart x0 + ... + x_{d-1} = 1."""
    states = list(cloud.points)
    fig, axes = _grid(len(states), min(3, len(states)))
    for ax, s in zip(axes, states):
        pts = np.array([[float(a) for a in p] for p in cloud.points[s]]).reshape(-1, dim)
        if dim == 2:
            ax.scatter(pts[:, 0], np.zeros(len(pts)), s=4, marker="|")
            ax.set_xlim(0, 1)
            ax.set_yticks([])
            ax.set_xlabel("x0 / (x0 + x1)")
        else:
            _simplex(ax)
            ax.scatter(pts[:, 0], pts[:, 1], s=0.5, color="tab:blue")
            for cone in (assign.pieces.get(s, []) if assign else []):
                poly = np.array([[float(a) for a in normalize_sum(list(v))[:2]] for v in _ordered(cone)])
                ax.fill(poly[:, 0], poly[:, 1], fill=False, edgecolor="tab:red", lw=1)
        ax.set_title(f"state {state_name(s)}  (depth {cloud.depth})", fontsize=9)
    fig.tight_layout()
    return fig


def _ordered(cone):
    pts = [np.array([float(a) for a in normalize_sum(list(v))[:2]]) for v in cone]
    c = sum(pts) / len(pts)
    order = sorted(range(len(pts)), key=lambda k: np.arctan2(*(pts[k] - c)[::-1]))
    return [cone[k] for k in order]


def _bin_triangulation():
    n = 2 ** TRI_DEPTH
    vid = {}
    xy = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            vid[i, j] = len(xy)
            xy.append((i / n, j / n))
    tris = np.zeros((2 * n * n, 3), dtype=int)
    valid = np.zeros(2 * n * n, dtype=bool)
    for i in range(n):
        for j in range(n - i):
            k = 2 * (i * n + j)
            tris[k] = (vid[i, j], vid[i + 1, j], vid[i, j + 1])
            valid[k] = True
            if i + j < n - 1:
                tris[k + 1] = (vid[i + 1, j], vid[i + 1, j + 1], vid[i, j + 1])
                valid[k + 1] = True
    xy = np.array(xy)
    return Triangulation(xy[:, 0], xy[:, 1], tris[valid]), valid


def density_figure(report: EmpiricalReport, states: list, dim: int):
    """Empirical against symbolic bin masses, one row per state."""
    shown = [s for s in states if s in report.expected]
    fig, axes = _grid(2 * len(shown), 2)
    tri, valid = _bin_triangulation() if dim == 3 else (None, None)
    for k, s in enumerate(shown):
        row = report.counts[states.index(s)]
        emp = row / max(row.sum(), 1)
        sym = report.expected[s]
        area = 1 / (2 * 4 ** TRI_DEPTH)
        top = np.log10(max(emp.max(), sym.max()) / area + 1e-3)
        for ax, vals, label in ((axes[2 * k], emp, "empirical"), (axes[2 * k + 1], sym, "symbolic")):
            if dim == 2:
                t = (np.arange(BINS_1D) + 0.5) / BINS_1D
                ax.step(t, vals * BINS_1D, where="mid")
                ax.set_xlabel("x0 / (x0 + x1)")
            else:
                _simplex(ax)
                pc = ax.tripcolor(tri, facecolors=np.log10(vals[valid] / area + 1e-3), cmap="viridis", vmin=-1, vmax=top)
                fig.colorbar(pc, ax=ax, shrink=0.7, label="log10 density")
            ax.set_title(f"state {state_name(s)}: {label}  L1 = {report.l1[s]:.4f}", fontsize=9)
    fig.tight_layout()
    return fig


def save(fig, path: str, fmt: str | None = None):
    fig.savefig(path, format=fmt, dpi=120)
    plt.close(fig)
