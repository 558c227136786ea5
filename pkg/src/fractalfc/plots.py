"""Deterministic SVG figures for sweep and scale-profile results.

The SVG backend embeds hashed ids and (by default) a creation date; both
are pinned here so reruns of the same experiment produce byte-identical
files.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

from matplotlib import rcParams
from matplotlib.figure import Figure

_SVG_METADATA = {"Date": None}

rcParams["svg.hashsalt"] = "fractalfc"

_ESTIMATOR_COLORS = {"pearson": "#1f77b4", "mi": "#2ca02c", "te": "#d62728"}


def _save(fig: Figure, path) -> None:
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)


def sweep_plot(result, path) -> None:
    """Mean centrality distortion versus sigma_h, one line per estimator."""
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    by_est: dict[str, list] = {}
    for row in result.rows:
        by_est.setdefault(row.estimator, []).append(row)
    for est, rows in by_est.items():
        rows = sorted(rows, key=lambda r: r.sigma_h)
        x = [r.sigma_h for r in rows]
        y = [r.mean_distortion_mean for r in rows]
        err = [r.mean_distortion_sd for r in rows]
        ax.errorbar(
            x, y, yerr=err, label=est, color=_ESTIMATOR_COLORS.get(est),
            marker="o", capsize=3,
        )
    ax.set_xlabel("exponent spread sigma_h")
    ax.set_ylabel("mean centrality distortion")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def scale_profile_plot(result, path) -> None:
    """Heatmap of mean wavelet-correlation distortion, level x quartile."""
    levels = len(result.levels)
    grid = np.zeros((4, levels))
    for q in range(1, 5):
        mask = result.quartile == q
        if mask.any():
            grid[q - 1] = result.wavelet_distortion[mask].mean(axis=0)
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    im = ax.imshow(grid, aspect="auto", origin="lower", cmap="viridis")
    ax.set_xticks(range(levels))
    ax.set_xticklabels([str(j) for j in result.levels])
    ax.set_yticks(range(4))
    ax.set_yticklabels([f"Q{q}" for q in range(1, 5)])
    ax.set_xlabel("wavelet level (large = low frequency)")
    ax.set_ylabel("centrality quartile (Q1 = least central)")
    fig.colorbar(im, ax=ax, label="mean wavelet-correlation distortion")
    fig.tight_layout()
    _save(fig, path)


def trial_plot(result, path) -> None:
    """Heatmap of per-node, per-level wavelet-correlation distortion."""
    fig = Figure(figsize=(6, 5))
    ax = fig.subplots()
    im = ax.imshow(
        result.wavelet_distortion, aspect="auto", origin="lower", cmap="viridis"
    )
    ax.set_xticks(range(result.wavelet_distortion.shape[1]))
    ax.set_xticklabels(
        [str(j + 1) for j in range(result.wavelet_distortion.shape[1])]
    )
    ax.set_xlabel("wavelet level")
    ax.set_ylabel("node")
    fig.colorbar(im, ax=ax, label="wavelet-correlation distortion")
    fig.tight_layout()
    _save(fig, path)
