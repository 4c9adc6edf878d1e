"""Minimal deterministic SVG line plots."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_W, _H = 640, 400
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(series, xlabel: str, ylabel: str, title: str = "") -> str:
    """SVG text for ``series``: a sequence of (label, xs, ys) triples."""
    series = [(str(lab), np.asarray(xs, float), np.asarray(ys, float)) for lab, xs, ys in series]
    if not series or any(xs.size == 0 or xs.shape != ys.shape for _, xs, ys in series):
        raise ValueError("need at least one nonempty series with matching x and y")
    allx = np.concatenate([xs for _, xs, _ in series])
    ally = np.concatenate([ys for _, _, ys in series])
    fin = np.isfinite(allx) & np.isfinite(ally)
    if not fin.any():
        raise ValueError("series contain no finite points")
    x0, x1 = float(allx[fin].min()), float(allx[fin].max())
    y0, y1 = float(ally[fin].min()), float(ally[fin].max())
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return _MT + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        px = _fmt(sx(t))
        out.append(f'<line x1="{px}" y1="{_MT + ph}" x2="{px}" y2="{_MT + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{_MT + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        py = _fmt(sy(t))
        out.append(f'<line x1="{_ML - 5}" y1="{py}" x2="{_ML}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{_ML - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">{t:g}</text>')
    out.append(f'<text x="{_ML + pw / 2:.1f}" y="{_H - 10}" text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(
        f'<text x="15" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 15 {_MT + ph / 2:.1f})">{_esc(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{_W / 2:.1f}" y="18" text-anchor="middle">{_esc(title)}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        ok = np.isfinite(xs) & np.isfinite(ys)
        pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(xs[ok], ys[ok]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        if len(series) > 1 or label:
            ly = _MT + 15 + 15 * i
            out.append(f'<line x1="{_ML + pw - 110}" y1="{ly}" x2="{_ML + pw - 90}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{_ML + pw - 85}" y="{ly}" dominant-baseline="middle">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(series, xlabel: str, ylabel: str, path, title: str = "") -> Path:
    """Render and write the plot; nothing is written if rendering fails."""
    text = render_svg(series, xlabel, ylabel, title)
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
