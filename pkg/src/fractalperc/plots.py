"""Figure rendering for the CLI report paths.

Each report command writes its figure next to the delimited output; the
CSV stays the determinism contract, the figure is a convenience view.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def theta_plot(curve, path, title="crossing probability"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.errorbar(curve.p_grid, curve.values, yerr=3 * curve.stderr, lw=1.5, elinewidth=0.6)
    ax.set_xlabel("p")
    ax.set_ylabel("crossing frequency")
    ax.set_title(f"{title} ({curve.sample_count} samples)")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def thresholds_plot(thresholds, path, title="bottleneck thresholds"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    srt = np.sort(thresholds)
    ax.plot(srt, np.arange(1, len(srt) + 1) / len(srt), lw=1.5)
    ax.set_xlabel("threshold")
    ax.set_ylabel("empirical cdf")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def coupling_plot(report, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(report.p_grid, report.theta_s_tilde, label="identified gasket at p", lw=1.5)
    ax.plot(report.p_grid, report.theta_t_pushed, "--", label="quotient, min-pair labels at p", lw=1.2)
    ax.plot(report.p_grid, report.theta_t_2p, label="quotient at 2p", lw=1.5)
    ax.set_xlabel("p")
    ax.set_ylabel("crossing frequency")
    ax.set_title(f"quotient coupling, level {report.level} ({report.samples} samples)")
    ax.legend()
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def pc_table_plot(table, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for j, n in enumerate(table.n_values):
        ax.plot(table.m_values, [row[j] for row in table.values], marker="o", label=f"n={n}")
    ax.set_xlabel("branches m")
    ax.set_ylabel("critical probability")
    ax.set_title("diamond critical values")
    ax.legend()
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def pc_diamond_plot(rows, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    levels = [r.level for r in rows]
    ax.plot(levels, [r.median for r in rows], marker="o", label="sample median")
    ax.plot(levels, [r.median_exact for r in rows], marker="x", label="exact median")
    ax.set_xlabel("level")
    ax.set_ylabel("median bottleneck threshold")
    ax.set_title("median concentration toward the fixed point")
    ax.legend()
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def trace_plot(orbit, path, title="crossing recursion orbit"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(range(len(orbit)), orbit, marker="o", lw=1.2)
    ax.set_xlabel("level")
    ax.set_ylabel("crossing probability")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def isoperimetry_plot(rows, exponent, constant, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    sizes = np.array([r[1] for r in rows], dtype=float)
    bounds = np.array([r[2] for r in rows], dtype=float)
    ax.loglog(sizes, bounds, ".", ms=3, alpha=0.5, label="sampled regions")
    grid = np.geomspace(1, max(sizes.max(), 2), 64)
    ax.loglog(grid, constant * grid**exponent, "r-", label="lower bound")
    ax.set_xlabel("region size |J|")
    ax.set_ylabel("boundary edges")
    ax.set_title("region boundary vs. isoperimetric bound")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def cluster_plot(sizes, path, title="origin cluster sizes"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.hist(sizes, bins=min(60, max(10, len(set(sizes.tolist())))))
    ax.set_xlabel("cluster size")
    ax.set_ylabel("samples")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)
