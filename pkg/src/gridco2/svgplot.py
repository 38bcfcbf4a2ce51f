"""Minimal self-contained SVG line charts.

No plotting dependency: the CLI's chart output must be a single static file
that renders anywhere, and a polyline chart is all that is needed.  Output
is deterministic for identical inputs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

WIDTH = 900
HEIGHT = 420
MARGIN_LEFT = 72
MARGIN_RIGHT = 180
MARGIN_TOP = 40
MARGIN_BOTTOM = 48


def svg_line_chart(
    series: Mapping[str, Sequence[float]],
    x_labels: Sequence[str],
    path: str | Path,
    title: str = "",
    y_label: str = "",
) -> None:
    """Write one chart with a shared x axis and one polyline per entry."""
    if not series:
        raise ValueError("need at least one series to plot")
    n = len(x_labels)
    for name, values in series.items():
        if len(values) != n:
            raise ValueError(f"series {name!r} has {len(values)} points, axis has {n}")
    if n == 0:
        raise ValueError("need at least one point to plot")

    lo = min(min(v) for v in series.values())
    hi = max(max(v) for v in series.values())
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def x_at(i: int) -> float:
        return MARGIN_LEFT + (plot_w * i / (n - 1) if n > 1 else plot_w / 2)

    def y_at(value: float) -> float:
        return MARGIN_TOP + plot_h * (1 - (value - lo) / (hi - lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">'
        f"{_escape(title)}</text>",
    ]

    # Axes box and horizontal grid lines with value labels.
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333" stroke-width="1"/>'
    )
    for i in range(5):
        value = lo + (hi - lo) * i / 4
        y = y_at(value)
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{y:.1f}" x2="{MARGIN_LEFT + plot_w}" '
            f'y2="{y:.1f}" stroke="#ddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{y + 4:.1f}" text-anchor="end">'
            f"{value:.4g}</text>"
        )
    if y_label:
        parts.append(
            f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})">'
            f"{_escape(y_label)}</text>"
        )

    # A handful of x tick labels, first and last always included.
    tick_count = min(n, 8)
    tick_indices = sorted({round(i * (n - 1) / max(tick_count - 1, 1)) for i in range(tick_count)})
    for i in tick_indices:
        x = x_at(i)
        parts.append(
            f'<text x="{x:.1f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle">'
            f"{_escape(str(x_labels[i]))}</text>"
        )

    for idx, (name, values) in enumerate(series.items()):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{x_at(i):.1f},{y_at(v):.1f}" for i, v in enumerate(values))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = MARGIN_TOP + 14 + 18 * idx
        lx = MARGIN_LEFT + plot_w + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 28}" y="{ly}">{_escape(name)}</text>')

    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
