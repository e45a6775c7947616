"""Tiny deterministic SVG renderer for (x, y) trajectory plots.

Renders an ordered point sequence as a polyline with arrowheads on every
segment (the arrow direction shows progression along the schedule — later
years, larger subsets, higher error ratios).  Pure string assembly with fixed
float formatting, so identical inputs always produce identical bytes.
"""
from __future__ import annotations

from typing import Sequence

_WIDTH = 640
_HEIGHT = 480
_MARGIN_L = 64
_MARGIN_R = 16
_MARGIN_T = 30
_MARGIN_B = 46
_TICKS = 5


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.4g}"


def _scale(lo: float, hi: float) -> tuple[float, float]:
    """Pad a data range by 5% each side; give a degenerate range unit width."""
    if hi <= lo:
        center = lo
        return center - 0.5, center + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def trajectory_svg(
    points: Sequence[tuple[float, float]],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> str:
    """SVG document for an arrowed trajectory through ``points`` in order."""
    if not points:
        raise ValueError("no points to plot")
    x_lo, x_hi = _scale(min(p[0] for p in points), max(p[0] for p in points))
    y_lo, y_hi = _scale(min(p[1] for p in points), max(p[1] for p in points))
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<defs><marker id="ah" viewBox="0 0 8 8" refX="7" refY="4" '
        'markerWidth="6" markerHeight="6" orient="auto">'
        '<path d="M0,0 L8,4 L0,8 z" fill="#2060a0"/></marker></defs>',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#404040"/>',
    ]
    if title:
        out.append(
            f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_esc(title)}</text>'
        )
    for i in range(_TICKS):
        frac = i / (_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        xp, yp = px(xv), py(yv)
        out.append(
            f'<line x1="{_fmt(xp)}" y1="{_MARGIN_T + plot_h}" x2="{_fmt(xp)}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="#404040"/>'
        )
        out.append(
            f'<text x="{_fmt(xp)}" y="{_MARGIN_T + plot_h + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{_tick_label(xv)}</text>"
        )
        out.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{_fmt(yp)}" x2="{_MARGIN_L}" '
            f'y2="{_fmt(yp)}" stroke="#404040"/>'
        )
        out.append(
            f'<text x="{_MARGIN_L - 8}" y="{_fmt(yp + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_label(yv)}</text>'
        )
    if x_label:
        out.append(
            f'<text x="{_MARGIN_L + plot_w // 2}" y="{_HEIGHT - 8}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">'
            f"{_esc(x_label)}</text>"
        )
    if y_label:
        cx, cy = 16, _MARGIN_T + plot_h // 2
        out.append(
            f'<text x="{cx}" y="{cy}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 {cx} {cy})">{_esc(y_label)}</text>'
        )
    if len(points) > 1:
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in points)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="#2060a0" '
            'stroke-width="1.5" marker-mid="url(#ah)" marker-end="url(#ah)"/>'
        )
    for x, y in points:
        out.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" '
            'fill="#c03020"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
