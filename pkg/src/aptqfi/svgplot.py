"""Minimal log-log line plots written directly as SVG."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 150, 40, 60
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def decade_ticks(lo: float, hi: float) -> list[int]:
    """Integer powers of ten covering [lo, hi] (log10 values)."""
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def loglog_svg(series, *, xlabel: str, ylabel: str, title: str = "") -> str:
    """Render ``series`` (label -> (xs, ys)) on log-log axes.

    Points that are non-finite or non-positive are dropped; a series left
    with no points is omitted from the plot but kept in the legend.
    """
    cleaned = {}
    for label, (xs, ys) in series.items():
        pts = [
            (math.log10(x), math.log10(y))
            for x, y in zip(xs, ys)
            if x > 0 and y > 0 and math.isfinite(x) and math.isfinite(y)
        ]
        cleaned[label] = pts
    all_pts = [p for pts in cleaned.values() for p in pts]
    if not all_pts:
        all_pts = [(0.0, 0.0), (1.0, 1.0)]
    xticks = decade_ticks(min(p[0] for p in all_pts), max(p[0] for p in all_pts))
    yticks = decade_ticks(min(p[1] for p in all_pts), max(p[1] for p in all_pts))
    x0, x1 = xticks[0], max(xticks[-1], xticks[0] + 1)
    y0, y1 = yticks[0], max(yticks[-1], yticks[0] + 1)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(lx):
        return MARGIN_LEFT + (lx - x0) / (x1 - x0) * plot_w

    def sy(ly):
        return MARGIN_TOP + plot_h - (ly - y0) / (y1 - y0) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]
    for t in range(x0, x1 + 1):
        x = sx(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{MARGIN_TOP}" x2="{_fmt(x)}" y2="{MARGIN_TOP + plot_h}" stroke="#ddd"/>')
        out.append(f'<text x="{_fmt(x)}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle">1e{t}</text>')
    for t in range(y0, y1 + 1):
        y = sy(t)
        out.append(f'<line x1="{MARGIN_LEFT}" y1="{_fmt(y)}" x2="{MARGIN_LEFT + plot_w}" y2="{_fmt(y)}" stroke="#ddd"/>')
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_fmt(y + 4)}" text-anchor="end">1e{t}</text>')
    out.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_TOP + plot_h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{MARGIN_LEFT + plot_w / 2}" y="24" text-anchor="middle">{escape(title)}</text>')
    for i, (label, pts) in enumerate(cleaned.items()):
        color = COLORS[i % len(COLORS)]
        if pts:
            coords = " ".join(f"{_fmt(sx(px))},{_fmt(sy(py))}" for px, py in pts)
            out.append(f'<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = MARGIN_TOP + 14 + 18 * i
        lx = MARGIN_LEFT + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
