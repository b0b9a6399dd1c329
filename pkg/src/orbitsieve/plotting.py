"""Minimal self-contained SVG line charts (no external assets).

Deterministic output: fixed viewport, fixed float formatting, no ids or
timestamps, so identical data produces identical bytes.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

__all__ = ["write_series_svg"]

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, log: bool) -> list:
    if log:
        return [float(t) for t in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]
    if hi <= lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / 4))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= 6:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * abs(hi):
        out.append(t)
        t += step
    return out


def write_series_svg(path, xs, ys, title: str = "", xlabel: str = "N",
                     ylabel: str = "|A_N|", loglog: bool = True,
                     header_comment: str = "") -> None:
    """One polyline chart; log-log axes by default for convergence plots."""
    pts = [(float(x), float(y)) for x, y in zip(xs, ys)]
    if loglog:
        pts = [(math.log10(x), math.log10(y)) for x, y in pts if x > 0 and y > 0]
    if not pts:
        pts = [(0.0, 0.0)]
    px = [p[0] for p in pts]
    py = [p[1] for p in pts]
    x_lo, x_hi = min(px), max(px)
    y_lo, y_hi = min(py), max(py)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(v):
        return _ML + (v - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(v):
        return _H - _MB - (v - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if header_comment:
        lines.append(f"<!-- {header_comment} -->")
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">'
    )
    lines.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    lines.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    if title:
        lines.append(
            f'<text x="{_W // 2}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for t in _ticks(x_lo, x_hi, loglog):
        x = sx(t)
        label = f"1e{t:g}" if loglog else f"{t:g}"
        lines.append(
            f'<line x1="{_fmt(x)}" y1="{_H - _MB}" x2="{_fmt(x)}" y2="{_H - _MB + 5}" '
            'stroke="black" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_fmt(x)}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    for t in _ticks(y_lo, y_hi, loglog):
        y = sy(t)
        label = f"1e{t:g}" if loglog else f"{t:g}"
        lines.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(y)}" x2="{_ML}" y2="{_fmt(y)}" '
            'stroke="black" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_ML - 8}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    lines.append(
        f'<text x="{_W // 2}" y="{_H - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>'
    )
    lines.append(
        f'<text x="16" y="{_H // 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {_H // 2})">{ylabel}</text>'
    )
    coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
    lines.append(
        f'<polyline points="{coords}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>'
    )
    for x, y in pts:
        lines.append(
            f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="2.5" fill="#1f4e9c"/>'
        )
    lines.append("</svg>")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)
