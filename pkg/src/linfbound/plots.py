"""Minimal static SVG line charts.

Output depends only on the data, so identical reports give byte-identical
files.
"""

from __future__ import annotations

import math
from html import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=170, top=40, bottom=55)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#17becf", "#7f7f7f", "#bcbd22", "#000000")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks_linear(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks, t = [], start
    while t <= hi + 1e-12 * abs(hi):
        ticks.append(round(t, 12))
        t += step
    return ticks


def _ticks_log(lo: float, hi: float) -> list[float]:
    return [10.0 ** e for e in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
            if lo <= 10.0 ** e <= hi] or [lo]


def line_plot(series: dict[str, tuple[list[float], list[float]]], *, title: str = "",
              xlabel: str = "n", ylabel: str = "", logx: bool = True, logy: bool = False) -> str:
    """Render ``{label: (xs, ys)}`` as polylines with axes and a legend."""
    pts = [(x, y) for xs, ys in series.values() for x, y in zip(xs, ys)
           if y is not None and math.isfinite(y) and (not logy or y > 0)]
    if not pts:
        pts = [(1.0, 0.0), (10.0, 1.0)]
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = (min(ys), max(ys)) if logy else (0.0, max(ys) * 1.05 or 1.0)
    if x0 == x1:
        x0, x1 = (x0 / 10, x1 * 10) if logx else (x0 - 1, x1 + 1)
    if y0 == y1:
        y0, y1 = (y0 / 10, y1 * 10) if logy else (y0 - 1, y1 + 1)
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (tx(x) - tx(x0)) / (tx(x1) - tx(x0)) * pw

    def py(y):
        return MARGIN["top"] + ph - (ty(y) - ty(y0)) / (ty(y1) - ty(y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<path d="M{bx} {MARGIN["top"]}V{by}H{bx + pw}" stroke="black" fill="none"/>')
    for t in (_ticks_log(x0, x1) if logx else _ticks_linear(x0, x1)):
        X = px(t)
        label = f"1e{round(math.log10(t))}" if logx else f"{t:g}"
        out.append(f'<line x1="{_fmt(X)}" y1="{by}" x2="{_fmt(X)}" y2="{by + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{by + 18}" text-anchor="middle">{label}</text>')
    for t in (_ticks_log(y0, y1) if logy else _ticks_linear(y0, y1)):
        Y = py(t)
        out.append(f'<line x1="{bx - 5}" y1="{_fmt(Y)}" x2="{bx}" y2="{_fmt(Y)}" stroke="black"/>')
        out.append(f'<text x="{bx - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{bx + pw / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{MARGIN["top"] + ph / 2:.0f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN["top"] + ph / 2:.0f})">{escape(ylabel)}</text>')
    for i, (name, (sx, sy)) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = [f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(sx, sy)
                  if y is not None and math.isfinite(y) and (not logy or y > 0)]
        if coords:
            out.append(f'<polyline points="{" ".join(coords)}" fill="none" stroke="{color}" stroke-width="1.8"/>')
        ly = MARGIN["top"] + 12 + 16 * i
        lx = WIDTH - MARGIN["right"] + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
