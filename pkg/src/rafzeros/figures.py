"""Matplotlib rendering for the report path.

Each CLI command that writes delimited output can also render the same
data as a PNG next to it.  Figures are plain diagnostic plots: no
styling beyond a consistent rc block, and everything is written through
a temp-file rename so a crash never leaves a truncated image.
"""

from __future__ import annotations

import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless; must precede pyplot

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_figure",
    "density_figure",
    "convergence_figure",
    "covariance_figure",
    "limit_process_figure",
    "realization_figure",
    "agreement_figure",
]

_RC = {
    "figure.figsize": (7.0, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "legend.frameon": False,
}


def save_figure(fig, path: Path) -> None:
    """Write the figure atomically and release it."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        # format from the real target; the temp suffix would mislead savefig
        fig.savefig(tmp, format=path.suffix.lstrip(".") or "png", bbox_inches="tight")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if tmp.exists():
            tmp.unlink()


def density_figure(ts, density, gamma_vals, label: str):
    """Limiting zero density and local frequency over the interval."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(ts, density, color="tab:blue", label="limit zero density")
        ax.set_xlabel("t")
        ax.set_ylabel("density", color="tab:blue")
        twin = ax.twinx()
        twin.plot(ts, gamma_vals, color="tab:orange", ls="--", label="local frequency")
        twin.set_ylabel("local frequency", color="tab:orange")
        twin.grid(False)
        ax.set_title(f"{label}: limiting real-zero density")
    return fig


def convergence_figure(ns, scaled_means, stderrs, theory: float, label: str):
    """Scaled mean counts against n with the limiting rate."""
    ns = np.asarray(ns, dtype=float)
    scaled = np.asarray(scaled_means, dtype=float)
    err = 3.0 * np.asarray(stderrs, dtype=float) / np.sqrt(ns)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.errorbar(ns, scaled, yerr=err, fmt="o-", capsize=3, label="scaled mean count")
        ax.axhline(theory, color="tab:red", ls="--", label="limiting rate")
        ax.set_xscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("mean count / sqrt(n)")
        ax.set_title(f"{label}: convergence of the scaled zero count")
        ax.legend()
    return fig


def covariance_figure(offsets, empirical, theory, label: str):
    """Empirical window covariance against the Gaussian limit, by lag."""
    offsets = np.asarray(offsets, dtype=float)
    lags, emp_vals, th_vals = [], [], []
    for i in range(len(offsets)):
        for j in range(i, len(offsets)):
            lags.append(abs(offsets[i] - offsets[j]))
            emp_vals.append(empirical[i, j])
            th_vals.append(theory[i, j])
    order = np.argsort(lags)
    lags = np.asarray(lags)[order]
    emp_vals = np.asarray(emp_vals)[order]
    th_vals = np.asarray(th_vals)[order]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(lags, th_vals, "--", color="tab:red", label="limit covariance")
        ax.plot(lags, emp_vals, "o", color="tab:blue", label="empirical")
        ax.set_xlabel("offset lag |x_i - x_j|")
        ax.set_ylabel("covariance")
        ax.set_title(f"{label}: window covariance")
        ax.legend()
    return fig


def limit_process_figure(gammas, means, stderrs, theories):
    """Limit-process zero counts against the stationary prediction."""
    gammas = np.asarray(gammas, dtype=float)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.errorbar(
            gammas,
            means,
            yerr=3.0 * np.asarray(stderrs),
            fmt="o",
            capsize=3,
            label="mean count",
        )
        ax.plot(gammas, theories, "--", color="tab:red", label="delta sqrt(gamma) / pi")
        ax.set_xscale("log")
        ax.set_xlabel("gamma")
        ax.set_ylabel("mean zero count")
        ax.set_title("limit process: zero counts")
        ax.legend()
    return fig


def realization_figure(ts, values, label: str):
    """One normalized realization with its axis crossings."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(ts, values, lw=0.9)
        ax.axhline(0.0, color="black", lw=0.7)
        ax.set_xlabel("t")
        ax.set_ylabel("normalized value")
        ax.set_title(f"{label}: one realization")
    return fig


def agreement_figure(grid_counts, oracle_counts, agree_flags):
    """Grid versus oracle counts; disagreements highlighted."""
    grid_counts = np.asarray(grid_counts, dtype=float)
    oracle_counts = np.asarray(oracle_counts, dtype=float)
    agree_flags = np.asarray(agree_flags, dtype=bool)
    jitter = np.random.default_rng(0).uniform(-0.12, 0.12, size=(2, grid_counts.size))
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        hi = max(grid_counts.max(initial=0.0), oracle_counts.max(initial=0.0)) + 1.0
        ax.plot([0, hi], [0, hi], color="tab:gray", lw=0.8)
        ok = agree_flags
        ax.plot(
            oracle_counts[ok] + jitter[0, ok],
            grid_counts[ok] + jitter[1, ok],
            ".",
            color="tab:blue",
            alpha=0.5,
            label="agree",
        )
        if np.any(~ok):
            ax.plot(
                oracle_counts[~ok] + jitter[0, ~ok],
                grid_counts[~ok] + jitter[1, ~ok],
                "x",
                color="tab:red",
                label="disagree",
            )
        ax.set_xlabel("oracle count")
        ax.set_ylabel("grid count")
        ax.set_title("grid counter vs companion-matrix oracle")
        ax.legend()
    return fig
