"""Minimal deterministic SVG line plot (success rate vs sparsity)."""
from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 150, 40, 56
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _num(x: float) -> str:
    return f"{x:.2f}"


def line_plot(series: dict, x_range: tuple[int, int], title: str = "",
              y_range: tuple[float, float] = (0.0, 1.0), comment: str = "") -> str:
    """Render ``{label: [(x, y), ...]}`` as an SVG document string.

    Each series becomes one polyline with point markers; empty series only
    appear in the legend.
    """
    x0, x1 = x_range
    if x1 <= x0:
        x1 = x0 + 1
    y0, y1 = y_range
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
    ]
    if comment:
        out.append(f"<!-- {escape(comment.replace('--', '- -'))} -->")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
                   f"{escape(title)}</text>")

    # axes
    bx, by = MARGIN_L, MARGIN_T + ph
    out.append(f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}" stroke="black"/>')
    out.append(f'<line x1="{bx}" y1="{MARGIN_T}" x2="{bx}" y2="{by}" stroke="black"/>')
    step = max(1, (x1 - x0) // 10)
    for x in range(x0, x1 + 1, step):
        X = _num(px(x))
        out.append(f'<line x1="{X}" y1="{by}" x2="{X}" y2="{by + 5}" stroke="black"/>')
        out.append(f'<text x="{X}" y="{by + 18}" text-anchor="middle">{x}</text>')
    for i in range(6):
        y = y0 + (y1 - y0) * i / 5
        Y = _num(py(y))
        out.append(f'<line x1="{bx - 5}" y1="{Y}" x2="{bx}" y2="{Y}" stroke="black"/>')
        out.append(f'<line x1="{bx}" y1="{Y}" x2="{bx + pw}" y2="{Y}" stroke="#dddddd"/>')
        out.append(f'<text x="{bx - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">'
                   f"{y:.2f}</text>")
    out.append(f'<text x="{bx + pw / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle">sparsity s</text>')
    out.append(f'<text x="16" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.1f})">success rate</text>')

    for n, (label, pts) in enumerate(series.items()):
        color = COLORS[n % len(COLORS)]
        coords = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)
        if len(pts) > 1:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 10 + 20 * n
        lx = MARGIN_L + pw + 14
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 30}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
