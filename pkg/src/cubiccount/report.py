"""Report rendering: delimited table, JSON, and matplotlib figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .mirror_map import NdTable, PotentialReport
from .series import fraction_to_str


def write_nd_csv(path: Path, tables) -> None:
    """Delimited curve-count table, one row per degree, one column per route."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["degree"] + [t.source for t in tables])
        degrees = range(1, min(t.max_degree for t in tables) + 1)
        for d in degrees:
            writer.writerow([d] + [fraction_to_str(t.n(d)) for t in tables])


def counts_figure(path: Path, table: NdTable) -> None:
    """log-scale growth of the counts, one marker per degree."""
    degrees = list(range(1, table.max_degree + 1))
    values = [float(table.n(d)) for d in degrees]
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.semilogy(degrees, values, "o-", color="#c03060")
    ax.set_xlabel("degree d")
    ax.set_ylabel("N_d")
    ax.set_xticks(degrees)
    ax.set_title("maximal-tangency curve counts")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def structure_figure(path: Path, structure, window=((-5, 12), (-3, 4))) -> None:
    """Wall arrangement in the chart window (matplotlib twin of the SVG)."""
    from .scattering.svg import _clip_ray

    (x0, x1), (y0, y1) = window
    box = tuple(map(float, (x0, x1, y0, y1)))
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    styles = {
        "slab": dict(color="#1a1a1a", lw=2.4),
        "kink-ray": dict(color="#7a7a7a", lw=1.2, ls="--"),
        "wall": dict(color="#c03060", lw=0.7),
    }
    j_window = structure.order // 3 + 6
    for w in structure.walls:
        for j in range(-j_window, j_window + 1):
            tw = w.translated(j)
            clipped = _clip_ray(tw.base, tw.direction, tw.length, box)
            if clipped is None:
                continue
            (ax1, ay1), (ax2, ay2) = clipped
            ax.plot(
                [float(ax1), float(ax2)], [float(ay1), float(ay2)], **styles[tw.kind]
            )
    ax.set_xlim(box[0], box[1])
    ax.set_ylim(box[2], box[3])
    ax.set_aspect("equal")
    ax.set_title(f"wall structure, t-order {structure.order}")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def verify_report_json(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def potential_report_text(pot: PotentialReport, use_zeta: bool) -> str:
    lines = [
        "B-model potential (s = 1 fiber):",
        f"  {pot.potential_text()}",
        f"  t d/dt: {pot.derivative_text()}",
        "  conventions: q = -t^3, i.e. the sign-free coordinate is t^3",
        f"  note: {pot.note}",
    ]
    if use_zeta:
        lines.insert(3, f"  c = -3*zeta(2) = {pot.constant_value:.12f}")
    return "\n".join(lines) + "\n"
