"""Deterministic SVG rendering of a wall structure.

Hand-built SVG so the byte output is a pure function of the input: one
polyline per wall clipped to the window, slabs drawn heavy, kink-rays
dashed, ordinary walls thin, with color by kind.
"""

from __future__ import annotations

from fractions import Fraction

from .walls import KIND_KINK_RAY, KIND_SLAB, KIND_WALL, WallStructure

SCALE = 40  # px per chart unit
STYLE = {
    KIND_SLAB: 'stroke="#1a1a1a" stroke-width="3"',
    KIND_KINK_RAY: 'stroke="#7a7a7a" stroke-width="1.6" stroke-dasharray="6,3"',
    KIND_WALL: 'stroke="#c03060" stroke-width="0.9"',
}


def _fmt(x: Fraction) -> str:
    return f"{float(x):.3f}"


def _clip_ray(base, direction, length, window):
    """Intersect base + s*direction (s in [0, length]) with the window box."""
    x0, x1, y0, y1 = window
    lo, hi = Fraction(0), Fraction(10**9) if length is None else Fraction(length)
    for b, d, wlo, whi in (
        (base[0], direction[0], x0, x1),
        (base[1], direction[1], y0, y1),
    ):
        if d == 0:
            if not (wlo <= b <= whi):
                return None
            continue
        s_a = (Fraction(wlo) - b) / d
        s_b = (Fraction(whi) - b) / d
        s_min, s_max = min(s_a, s_b), max(s_a, s_b)
        lo, hi = max(lo, s_min), min(hi, s_max)
    if lo > hi:
        return None
    p = (base[0] + lo * direction[0], base[1] + lo * direction[1])
    q = (base[0] + hi * direction[0], base[1] + hi * direction[1])
    return p, q


def render_diagram(structure: WallStructure, window) -> str:
    """SVG document for the chart window ((x_min, x_max), (y_min, y_max))."""
    (x0, x1), (y0, y1) = window
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must have positive extent")
    box = (Fraction(x0), Fraction(x1), Fraction(y0), Fraction(y1))
    width = float((box[1] - box[0]) * SCALE)
    height = float((box[3] - box[2]) * SCALE)

    def to_px(p):
        return (
            float((p[0] - box[0]) * SCALE),
            float((box[3] - p[1]) * SCALE),  # y axis up
        )

    segments = []
    j_window = structure.order // 3 + 6
    for w in sorted(
        structure.walls, key=lambda w: (w.kind, w.base[1], w.base[0], w.direction)
    ):
        for j in range(-j_window, j_window + 1):
            tw = w.translated(j)
            clipped = _clip_ray(tw.base, tw.direction, tw.length, box)
            if clipped is None:
                continue
            p, q = (to_px(clipped[0]), to_px(clipped[1]))
            segments.append(
                f'<line x1="{p[0]:.2f}" y1="{p[1]:.2f}" x2="{q[0]:.2f}" '
                f'y2="{q[1]:.2f}" {STYLE[tw.kind]} />'
            )
    body = "\n".join(segments)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
    )
