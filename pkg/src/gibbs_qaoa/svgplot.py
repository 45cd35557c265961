"""Minimal static SVG line plots (log-scaled x), no plotting dependency."""

from __future__ import annotations

import math

WIDTH, HEIGHT = 480, 320
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 56, 16, 28, 40
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e")


def _xpos(x, x0, x1):
    span = max(x1 - x0, 1e-12)
    return MARGIN_L + (x - x0) / span * (WIDTH - MARGIN_L - MARGIN_R)


def _ypos(y, y0, y1):
    span = max(y1 - y0, 1e-12)
    return HEIGHT - MARGIN_B - (y - y0) / span * (HEIGHT - MARGIN_T - MARGIN_B)


def line_plot(xs, series, labels, title="") -> str:
    """Poly-line chart of several series over a shared log10 x axis."""
    lx = [math.log10(x) for x in xs]
    x0, x1 = min(lx), max(lx)
    ymax = max((max(s) for s in series if s), default=1.0)
    y0, y1 = 0.0, max(1.0, ymax * 1.05)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH/2:.1f}" y="16" text-anchor="middle">{title}</text>',
    ]
    # axes box
    parts.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH-MARGIN_L-MARGIN_R}" '
        f'height="{HEIGHT-MARGIN_T-MARGIN_B}" fill="none" stroke="#555"/>'
    )
    # x ticks at powers of ten inside range
    for d in range(math.floor(x0), math.floor(x1) + 1):
        if x0 - 1e-9 <= d <= x1 + 1e-9:
            px = _xpos(d, x0, x1)
            parts.append(
                f'<line x1="{px:.1f}" y1="{HEIGHT-MARGIN_B}" x2="{px:.1f}" '
                f'y2="{HEIGHT-MARGIN_B+5}" stroke="#555"/>'
            )
            parts.append(
                f'<text x="{px:.1f}" y="{HEIGHT-MARGIN_B+18}" text-anchor="middle">'
                f"{10**d:g}</text>"
            )
    # y ticks
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yv = y0 + frac * (y1 - y0)
        py = _ypos(yv, y0, y1)
        parts.append(
            f'<line x1="{MARGIN_L-5}" y1="{py:.1f}" x2="{MARGIN_L}" y2="{py:.1f}" stroke="#555"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L-8}" y="{py+4:.1f}" text-anchor="end">{yv:.2g}</text>'
        )
    parts.append(
        f'<text x="{WIDTH/2:.1f}" y="{HEIGHT-8}" text-anchor="middle">p</text>'
    )
    for i, (ys, label) in enumerate(zip(series, labels)):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(
            f"{_xpos(px, x0, x1):.1f},{_ypos(py, y0, y1):.1f}" for px, py in zip(lx, ys)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 14 + 14 * i
        lx0 = WIDTH - MARGIN_R - 110
        parts.append(
            f'<line x1="{lx0}" y1="{ly-4}" x2="{lx0+18}" y2="{ly-4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(f'<text x="{lx0+24}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
