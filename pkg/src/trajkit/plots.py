"""Figure rendering for the CLI report path.

All plots are written straight to files (SVG by default); nothing is shown
interactively.  Figures are presentation-only: the CSV outputs next to
them are the authoritative numbers.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_group_overlay(u, seqs, curve, path, title=""):
    """Processed demos (black) with the extracted barycenter (red), one panel per dimension."""
    dim = seqs[0].shape[1]
    fig, axes = plt.subplots(dim, 1, figsize=(7, 2.2 * dim), sharex=True, squeeze=False)
    for j in range(dim):
        ax = axes[j, 0]
        for s in seqs:
            ax.plot(u, s[:, j], color="black", alpha=0.35, lw=0.9)
        ax.plot(u, curve[:, j], color="tab:red", lw=1.8)
        ax.set_ylabel(f"x{j}")
    axes[-1, 0].set_xlabel("normalized parameter")
    if title:
        axes[0, 0].set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_reference_sensitivity(rows, path):
    """d_H and d_DTW per alignment-reference choice."""
    refs = [r.reference for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3))
    ax1.bar(refs, [r.d_h for r in rows], color="tab:red")
    ax1.set_xlabel("reference index")
    ax1.set_ylabel("d_H")
    ax2.bar(refs, [r.d_dtw for r in rows], color="tab:blue")
    ax2.set_xlabel("reference index")
    ax2.set_ylabel("d_DTW")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_gmm_sweep(rows, path):
    """d_H and d_DTW versus the number of mixture components."""
    feasible = [r for r in rows if r.feasible]
    gs = [r.g for r in feasible]
    fig, ax1 = plt.subplots(figsize=(6, 3.2))
    ax1.plot(gs, [r.d_h for r in feasible], "o-", color="tab:red", label="d_H")
    ax1.set_xlabel("G")
    ax1.set_ylabel("d_H", color="tab:red")
    ax2 = ax1.twinx()
    ax2.plot(gs, [r.d_dtw for r in feasible], "s-", color="tab:blue", label="d_DTW")
    ax2.set_ylabel("d_DTW", color="tab:blue")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_runtime_scaling(rows, path):
    """Log-log runtime per algorithm across input sizes."""
    algorithms = []
    for r in rows:
        if r.algorithm not in algorithms:
            algorithms.append(r.algorithm)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in algorithms:
        pts = [(r.size, r.median_s) for r in rows if r.algorithm == name]
        sizes = [p[0] for p in pts]
        medians = [max(p[1], 1e-9) for p in pts]
        ax.plot(sizes, medians, "o-", label=name)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("input size N")
    ax.set_ylabel("median runtime [s]")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_delta_search(report, path):
    """Hausdorff distance along the evaluated spacing progression."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(report.grid, report.dH, "ko-", label="d_H along the progression")
    if report.chosen is not None:
        ax.axvline(report.chosen, color="tab:red", ls="--", label="chosen spacing")
    ax.set_xscale("log")
    ax.set_xlabel("spacing (log scale)")
    ax.set_ylabel("d_H")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
