"""Minimal self-contained SVG rendering of EDC step curves."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

WIDTH, HEIGHT = 640, 400
MARGIN = 50


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def step_path(xs: Sequence[float], ys: Sequence[float], x_max: float) -> list[tuple[float, float]]:
    """Vertices of a right-constant step curve: horizontal, then vertical moves only."""
    pts = []
    for i, (x, y) in enumerate(zip(xs, ys)):
        if x > x_max:
            break
        if i:
            pts.append((x, pts[-1][1]))
        pts.append((x, y))
    if pts:
        pts.append((x_max, pts[-1][1]))
    return pts


def render_edc_svg(curves: Sequence, starting_error: float, x_max: float = 1.0,
                   y_max: float | None = None, title: str = "") -> str:
    """Stepwise curves plus the theoretical-best and starting-error reference lines."""
    if y_max is None:
        y_max = max([starting_error] + [float(max(c.errors)) for c in curves if len(c.errors)])
        y_max = y_max * 1.05 if y_max > 0 else 1.0
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + pw * x / x_max

    def sy(y):
        return HEIGHT - MARGIN - ph * min(y, y_max) / y_max

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">Discard fraction</text>',
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">Error</text>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for k in range(5):
        x = x_max * k / 4
        y = y_max * k / 4
        out.append(f'<text x="{sx(x):.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" font-size="10">{_fmt(x)}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{sy(y) + 3:.2f}" text-anchor="end" font-size="10">{_fmt(y)}</text>')

    kink = min(starting_error, x_max)
    out.append(f'<polyline points="{sx(0):.2f},{sy(starting_error):.2f} {sx(kink):.2f},'
               f'{sy(starting_error - kink):.2f} {sx(x_max):.2f},{sy(max(0.0, starting_error - x_max)):.2f}" '
               f'fill="none" stroke="grey" stroke-dasharray="6,4"/>')
    out.append(f'<line x1="{sx(0):.2f}" y1="{sy(starting_error):.2f}" x2="{sx(x_max):.2f}" '
               f'y2="{sy(starting_error):.2f}" stroke="grey" stroke-dasharray="2,3"/>')

    for i, c in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        pts = step_path(list(c.discard_fractions), list(c.errors), x_max)
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        name = escape(str(getattr(c, "algorithm", None) or f"curve {i + 1}"))
        ly = MARGIN + 14 * i + 10
        out.append(f'<line x1="{WIDTH - MARGIN - 110}" y1="{ly}" x2="{WIDTH - MARGIN - 90}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 85}" y="{ly + 4}" font-size="10">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
