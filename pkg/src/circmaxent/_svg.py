"""Tiny deterministic SVG line charts for experiment reports.

Hand-rolled so that identical data produces byte-identical files; no
timestamps, random ids, or library version strings end up in the output.
"""
from __future__ import annotations

import math

_WIDTH, _HEIGHT = 880, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 30, 50, 60
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_chart(
    title: str,
    x: list[float],
    series: list[tuple[str, list[float | None]]],
    x_label: str = "",
    y_label: str = "",
) -> str:
    """Render labelled polylines over a shared x axis; None breaks a line."""
    finite = [
        v for _, ys in series for v in ys if v is not None and math.isfinite(v)
    ]
    x_lo, x_hi = (min(x), max(x)) if x else (0.0, 1.0)
    y_lo, y_hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo or 1.0) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="monospace" font-size="13">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="25" text-anchor="middle" font-size="16">{title}</text>',
    ]
    for tx in _ticks(x_lo, x_hi):
        px = sx(tx)
        parts.append(
            f'<line x1="{px:.1f}" y1="{_MARGIN_T}" x2="{px:.1f}" '
            f'y2="{_HEIGHT - _MARGIN_B}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{_HEIGHT - _MARGIN_B + 20}" '
            f'text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        py = sy(ty)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{py:.1f}" x2="{_WIDTH - _MARGIN_R}" '
            f'y2="{py:.1f}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{py + 4:.1f}" text-anchor="end">{_fmt(ty)}</text>'
        )
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{_WIDTH / 2:.1f}" y="{_HEIGHT - 15}" text-anchor="middle">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="20" y="{_HEIGHT / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 20 {_HEIGHT / 2:.1f})">{y_label}</text>'
        )

    for idx, (label, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        segments: list[list[str]] = [[]]
        for xv, yv in zip(x, ys):
            if yv is None or not math.isfinite(yv):
                if segments[-1]:
                    segments.append([])
                continue
            segments[-1].append(f"{sx(xv):.2f},{sy(yv):.2f}")
        for seg in segments:
            if len(seg) > 1:
                parts.append(
                    f'<polyline points="{" ".join(seg)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
        ly = _MARGIN_T + 18 + 18 * idx
        lx = _WIDTH - _MARGIN_R - 160
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 26}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 32}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
