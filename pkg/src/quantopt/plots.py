"""Static figure rendering for run artifacts (Agg backend, files only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (6.4, 4.4)
DPI = 150
PNG_METADATA = {"Software": "quantopt"}  # keep byte content free of timestamps


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)


def save_front(path, objectives, labels=("objective 1", "objective 2"),
               reference_lines=None):
    """Scatter of a two-objective front, optionally with reference lines.

    `reference_lines` maps a label to ("v"|"h", value): vertical lines mark
    objective-1 references, horizontal lines objective-2 references.
    """
    objectives = np.asarray(objectives, dtype=float)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    order = np.argsort(objectives[:, 0])
    ax.plot(objectives[order, 0], objectives[order, 1], "o-", ms=3.5, lw=0.8,
            color="#1f77b4", label="front")
    if reference_lines:
        for name, (orientation, value) in reference_lines.items():
            line = ax.axvline if orientation == "v" else ax.axhline
            line(value, color="0.4", ls=":", lw=1.0, label=name)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_ecdf_curves(path, curves, xlabel="response"):
    """Step plot of one or more ECDFs; `curves` maps label -> Ecdf."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, ecdf in curves.items():
        ax.step(ecdf.sorted_values, ecdf.cumulative, where="post", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("cumulative probability")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_error_curves(path, m_values, se_values, me_values):
    """Log-log standard and maximum quantile error versus sub-sample size."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.loglog(m_values, se_values, "o-", label="standard error")
    ax.loglog(m_values, me_values, "s--", label="maximum error")
    ax.set_xlabel("sub-sample size")
    ax.set_ylabel("quantile error")
    ax.grid(alpha=0.3, which="both")
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_belief_plausibility(path, estimated, exact=None):
    """Estimated Bel/Pl step curves, with exact curves overlaid when given."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    t = estimated.thresholds
    ax.step(t, estimated.belief, where="post", color="#1f77b4", label="belief (estimate)")
    ax.step(t, estimated.plausibility, where="post", color="#d62728",
            label="plausibility (estimate)")
    if exact is not None:
        ax.step(exact.thresholds, exact.belief, where="post", color="#1f77b4",
                ls="--", alpha=0.7, label="belief (exact)")
        ax.step(exact.thresholds, exact.plausibility, where="post", color="#d62728",
                ls="--", alpha=0.7, label="plausibility (exact)")
    ax.set_xlabel("threshold")
    ax.set_ylabel("measure")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)


def save_curve(path, x, y, xlabel, ylabel):
    """Plain line plot, used for deterministic benchmark profiles."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(x, y, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_coverage_band(path, ecdf, grid, f_low, f_high):
    """ECDF with the envelope of its bootstrap replicate curves shaded."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.fill_between(grid, f_low, f_high, step="post", color="0.8",
                    label="bootstrap coverage")
    ax.step(ecdf.sorted_values, ecdf.cumulative, where="post", color="k",
            lw=1.0, label="ECDF")
    ax.set_xlabel("response")
    ax.set_ylabel("cumulative probability")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    _finish(fig, path)
