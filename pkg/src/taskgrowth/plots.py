"""Optional SVG side outputs (data-faithful, unstyled)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_statics(rows, endow, path):
    """Line charts of Y/L, w, s_L, K/Y against z*."""
    z = [r.z_star for r in rows]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), constrained_layout=True)
    panels = [
        ("Y / L", [r.Y / endow.L for r in rows]),
        ("w", [r.w for r in rows]),
        ("s_L", [r.s_L for r in rows]),
        ("K / Y", [min(r.K_over_Y, 1e6) for r in rows]),
    ]
    for ax, (label, ys) in zip(axes.ravel(), panels):
        ax.plot(z, ys)
        ax.set_xlabel("z*")
        ax.set_ylabel(label)
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_trajectory(traj, path):
    """Time series of the key variables plus the w/w0 vs z* phase plot."""
    fig, axes = plt.subplots(2, 3, figsize=(12, 6), constrained_layout=True)
    series = [
        ("knowledge", traj.knowledge),
        ("task mass", traj.task_mass),
        ("z*", traj.z_star),
        ("w", traj.w),
        ("s_L", traj.s_L),
    ]
    for ax, (label, ys) in zip(axes.ravel(), series):
        ax.plot(traj.t, ys)
        ax.set_xlabel("t")
        ax.set_ylabel(label)
    ax = axes.ravel()[-1]
    w0 = traj.w[0] if traj.w[0] > 0 else 1.0
    ax.plot(traj.z_star, traj.w / w0)
    ax.set_xlabel("z*")
    ax.set_ylabel("w / w0")
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_importance(report, path):
    """Horizontal bar chart of normalized impurity importances."""
    order = np.argsort(report.impurity)
    names = [report.feature_names[i] for i in order]
    fig, ax = plt.subplots(figsize=(7, 5), constrained_layout=True)
    ax.barh(names, report.impurity[order])
    ax.set_xlabel("impurity importance")
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_shap(records, path):
    """Beeswarm-style scatter: one row per feature, x = attribution,
    color = feature value percentile (blue low, red high)."""
    names = sorted({r["feature"] for r in records})
    ypos = {n: i for i, n in enumerate(names)}
    fig, ax = plt.subplots(figsize=(8, 0.4 * len(names) + 2), constrained_layout=True)
    xs = [r["shap_value"] for r in records]
    ys = [ypos[r["feature"]] + 0.1 * np.sin(7.0 * i) for i, r in enumerate(records)]
    cs = [r["feature_percentile"] for r in records]
    sc = ax.scatter(xs, ys, c=cs, cmap="coolwarm", vmin=0, vmax=100, s=12)
    ax.set_yticks(range(len(names)), names)
    ax.axvline(0.0, lw=0.5, color="k")
    ax.set_xlabel("attribution")
    fig.colorbar(sc, ax=ax, label="feature value percentile")
    fig.savefig(path, format="svg")
    plt.close(fig)
