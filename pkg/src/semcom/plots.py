"""Figure rendering for sweep artifacts (written to files, never shown)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .capacity import CapacityBoundsResult
from .rdp import RdpPoint


def plot_rdp_sweep(points: list[RdpPoint], path) -> None:
    """Rate vs distortion, one curve per mu value."""
    fig, ax = plt.subplots(figsize=(6, 4))
    mus = sorted({p.mu for p in points})
    for mu in mus:
        pts = [p for p in points if p.mu == mu and not math.isnan(p.rate)]
        pts.sort(key=lambda p: p.distortion)
        ax.plot(
            [p.distortion for p in pts],
            [p.rate for p in pts],
            marker="o",
            markersize=3,
            label=f"mu = {mu:g}",
        )
    ax.set_xlabel("distortion (mean square)")
    ax.set_ylabel("rate (bits)")
    ax.set_title("Rate-distortion-perception operating points")
    if len(mus) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_capacity_bounds(results: list[CapacityBoundsResult], path) -> None:
    """Lower/upper capacity bounds versus SNR with the KL gap shaded."""
    fig, ax = plt.subplots(figsize=(6, 4))
    snr = [r.snr_db for r in results]
    lower = [r.lower for r in results]
    upper = [r.upper for r in results]
    ax.plot(snr, lower, label="lower bound (equivalent Gaussian)")
    ax.plot(snr, upper, label="upper bound (lower + KL gap)", linestyle="--")
    ax.fill_between(snr, lower, upper, alpha=0.2)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("capacity (bits)")
    ax.set_title(f"Semantic channel capacity bounds (gap = {results[0].kl_gap:.4f} bits)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
