"""Figure rendering for transform curves and variance-stabilization sweeps.

Renders to image files alongside the CSV data the CLI emits; headless
(Agg) so it works without a display.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stabilization import variance_curve
from .transforms import TransformKind, continuous_forward

__all__ = ["plot_transform_curves", "plot_variance_ratios"]


def plot_transform_curves(
    n_list: Sequence[float], p_grid: Sequence[float], path: str
) -> None:
    """Plot theta against p for each sample size, with the large-N limit dashed."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for n in n_list:
        ax.plot(p_grid, [continuous_forward(p, n) for p in p_grid], label=f"N = {n:g}")
    ax.plot(
        p_grid,
        [math.asin(math.sqrt(p)) for p in p_grid],
        "k--",
        label="single arcsine (limit)",
    )
    ax.set_xlabel("proportion p")
    ax.set_ylabel("transformed value (radians)")
    ax.set_title("Double arcsine transform by sample size")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_variance_ratios(
    n_list: Sequence[int], p_grid: Sequence[float], path: str
) -> None:
    """Plot exact/target variance ratios for both transforms over the p grid."""
    fig, ax = plt.subplots(figsize=(7, 5))
    styles = {TransformKind.DOUBLE_ARCSINE: "-", TransformKind.SINGLE_ARCSINE: ":"}
    for kind, style in styles.items():
        for n in n_list:
            points = variance_curve(kind, n, p_grid)
            ax.plot(
                [pt.p for pt in points],
                [pt.ratio for pt in points],
                style,
                label=f"{kind.value}, N = {n}",
            )
    ax.axhline(1.0, color="grey", linewidth=0.8)
    ax.set_xlabel("true probability p")
    ax.set_ylabel("exact variance / stabilization target")
    ax.set_title("Variance stabilization quality")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
