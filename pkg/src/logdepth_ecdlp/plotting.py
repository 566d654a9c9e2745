"""Figures for resource-scaling tables."""

from __future__ import annotations

from math import ceil, log2
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .circuit import ResourceReport  # noqa: E402


def plot_scaling(rows: list[ResourceReport], path: str | Path) -> Path:
    """Depth against ``ceil(log2 n)`` per kind, with depth increments per step."""
    path = Path(path)
    kinds = sorted({r.name for r in rows})
    fig, (ax, ax_d) = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)
    for kind in kinds:
        sel = sorted((r for r in rows if r.name == kind), key=lambda r: r.n)
        xs = [ceil(log2(r.n)) for r in sel]
        ds = [r.depth for r in sel]
        ax.plot(xs, ds, marker="o", label=kind)
        if len(sel) > 1:
            ax_d.plot(xs[1:], [b - a for a, b in zip(ds, ds[1:])], marker="s", label=kind)
    ax.set_xlabel(r"$\lceil \log_2 n \rceil$")
    ax.set_ylabel("depth")
    ax.set_yscale("log")
    ax_d.set_xlabel(r"$\lceil \log_2 n \rceil$")
    ax_d.set_ylabel("depth increase from previous n")
    for a in (ax, ax_d):
        a.xaxis.set_major_locator(MaxNLocator(integer=True))
        a.grid(alpha=0.3)
        a.legend(frameon=False, fontsize=8)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
