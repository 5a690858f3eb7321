"""Figure rendering for the report paths of the CLI.

Every figure lands next to its delimited output file so a report is a
self-contained pair: numbers for machines, a picture for people.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_degree_histogram(hist: dict[int, int], out_path: str | Path, title: str) -> Path:
    """Bar chart of the degree distribution."""
    out_path = Path(out_path)
    degrees = sorted(hist)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(degrees, [hist[d] for d in degrees], color="#4878cf", width=0.8)
    ax.set_xlabel("degree")
    ax.set_ylabel("vertices")
    ax.set_title(title)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def save_scaling_plot(rows: Sequence[dict], out_path: str | Path) -> Path:
    """Build/reconstruct timings against vertex count, with an N log N guide.

    rows are bench records with keys n, vertices, build_ms, reconstruct_ms.
    """
    out_path = Path(out_path)
    ns = [r["n"] for r in rows]
    sizes = [r["vertices"] for r in rows]
    build_ms = [r["build_ms"] for r in rows]
    recon_ms = [r["reconstruct_ms"] for r in rows]
    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4.5))
    left.loglog(sizes, build_ms, "o-", label="build")
    left.loglog(sizes, recon_ms, "s-", label="reconstruct")
    if recon_ms and recon_ms[0] > 0:
        guide = [
            recon_ms[0] * (s * math.log2(s)) / (sizes[0] * math.log2(sizes[0]))
            for s in sizes
        ]
        left.loglog(sizes, guide, "k--", alpha=0.5, label="N log N guide")
    left.set_xlabel("vertices")
    left.set_ylabel("milliseconds")
    left.set_title("wall time")
    left.legend()
    left.grid(alpha=0.3, which="both")
    normalized = [
        t / (s * math.log2(s)) * 1000.0 for t, s in zip(recon_ms, sizes)
    ]
    right.plot(ns, normalized, "s-", color="#d65f5f")
    right.set_xlabel("points n")
    right.set_ylabel("reconstruct us / (N log2 N)")
    right.set_title("normalized reconstruction cost")
    right.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
