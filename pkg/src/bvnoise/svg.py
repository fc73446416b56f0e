"""Self-contained SVG 1.1 line charts with no external resources."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

WIDTH, HEIGHT = 800, 520
LEFT, RIGHT, TOP, BOTTOM = 80, 170, 50, 70

LOG_DECADES = 4.0


def wants_log_scale(values: Sequence[float]) -> bool:
    """True when the positive values span more than ``LOG_DECADES`` decades."""
    positive = [v for v in values if v > 0]
    if not positive or len(positive) < len(values):
        return False
    return math.log10(max(positive)) - math.log10(min(positive)) > LOG_DECADES


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _fmt_tick(v: float) -> str:
    return f"{v:.3g}"


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    *,
    title: str,
    x_label: str,
    y_label: str,
    log_y: bool | None = None,
) -> str:
    """Render ``(label, xs, ys)`` series as one polyline each.

    ``log_y=None`` picks a log axis automatically from the data range.
    """
    if not series:
        raise ValueError("no series to plot")
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("series are empty")
    if log_y is None:
        log_y = wants_log_scale(ys_all)
    if log_y and min(ys_all) <= 0:
        raise ValueError("log y-axis needs strictly positive values")

    def ty(y: float) -> float:
        return math.log10(y) if log_y else y

    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ty(y) for y in ys_all), max(ty(y) for y in ys_all)
    if log_y:
        y_lo, y_hi = math.floor(y_lo), math.ceil(y_hi)
    else:
        y_lo = min(0.0, y_lo)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM

    def px(x: float) -> float:
        return LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return TOP + plot_h - (ty(y) - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#000000"/>',
    ]

    for xv in _ticks(x_lo, x_hi):
        x = px(xv)
        out.append(f'<line x1="{x:.2f}" y1="{TOP + plot_h}" x2="{x:.2f}" y2="{TOP + plot_h + 5}" stroke="#000000"/>')
        out.append(
            f'<text x="{x:.2f}" y="{TOP + plot_h + 20}" text-anchor="middle" font-size="11">{_fmt_tick(xv)}</text>'
        )
    if log_y:
        y_ticks = [10.0**k for k in range(int(y_lo), int(y_hi) + 1)]
        step = max(1, len(y_ticks) // 8)
        y_ticks = y_ticks[::step]
    else:
        y_ticks = _ticks(y_lo, y_hi)
    for yv in y_ticks:
        y = py(yv)
        label = f"1e{int(round(math.log10(yv)))}" if log_y else _fmt_tick(yv)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.2f}" x2="{LEFT + plot_w}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11">{label}</text>')

    out.append(
        f'<text x="{LEFT + plot_w / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" font-size="13">{escape(x_label)}</text>'
    )
    y_title = escape(y_label + (" (log scale)" if log_y else ""))
    out.append(
        f'<text x="20" y="{TOP + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {TOP + plot_h / 2:.1f})">{y_title}</text>'
    )

    for k, (label, xs, ys) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{pts}"/>')
        ly = TOP + 14 + 20 * k
        lx = LEFT + plot_w + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}" font-size="12">{escape(label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_line_chart(path: Path, series, **kwargs) -> None:
    Path(path).write_text(line_chart(series, **kwargs), encoding="utf-8")
