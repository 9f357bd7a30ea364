"""Minimal deterministic SVG line and grouped-bar charts."""

from __future__ import annotations

from html import escape
from typing import Mapping, Sequence

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
W, H = 640, 260
ML, MR, MT, MB = 70, 20, 30, 45


def _f(v: float) -> str:
    return f"{v:.2f}"


def _bounds(values: Sequence[float], zero: bool = False) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if zero:
        lo, hi = min(lo, 0.0), max(hi, 0.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _frame(title: str, xlabel: str, ylabel: str, y0: float, y1: float, dy: float) -> list[str]:
    pw, ph = W - ML - MR, H - MT - MB
    out = [
        f'<text x="{W / 2}" y="{dy + 18}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{ML}" y="{dy + MT}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
        f'<text x="{W / 2}" y="{dy + H - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{dy + MT + ph / 2}" font-size="12" transform="rotate(-90 14 {dy + MT + ph / 2})" '
        f'text-anchor="middle">{escape(ylabel)}</text>',
    ]
    for i in range(5):
        v = y0 + (y1 - y0) * i / 4
        y = dy + MT + ph - ph * i / 4
        out.append(f'<text x="{ML - 6}" y="{_f(y + 4)}" text-anchor="end" font-size="10">{v:.3g}</text>')
        out.append(f'<line x1="{ML}" y1="{_f(y)}" x2="{W - MR}" y2="{_f(y)}" stroke="#ddd"/>')
    return out


def _legend(names: Sequence[str], dy: float) -> list[str]:
    out = []
    for i, name in enumerate(names):
        x = ML + 10 + 120 * i
        out.append(f'<rect x="{x}" y="{dy + MT + 6}" width="10" height="10" fill="{PALETTE[i % len(PALETTE)]}"/>')
        out.append(f'<text x="{x + 14}" y="{dy + MT + 15}" font-size="11">{escape(name)}</text>')
    return out


def line_panel(series: Mapping[str, tuple[Sequence[float], Sequence[float]]], title: str,
               xlabel: str, ylabel: str, dy: float = 0.0) -> list[str]:
    xs_all = [x for xs, _ in series.values() for x in xs]
    ys_all = [y for _, ys in series.values() for y in ys]
    x0, x1 = min(xs_all), max(xs_all)
    if x1 == x0:
        x1 = x0 + 1.0
    y0, y1 = _bounds(ys_all)
    pw, ph = W - ML - MR, H - MT - MB
    out = _frame(title, xlabel, ylabel, y0, y1, dy)
    for i, (xs, ys) in enumerate(series.values()):
        pts = " ".join(
            f"{_f(ML + pw * (x - x0) / (x1 - x0))},{_f(dy + MT + ph - ph * (y - y0) / (y1 - y0))}"
            for x, y in zip(xs, ys)
        )
        out.append(f'<polyline fill="none" stroke="{PALETTE[i % len(PALETTE)]}" stroke-width="1.5" points="{pts}"/>')
    return out + _legend(list(series), dy)


def bar_panel(groups: Sequence[str], series: Mapping[str, Sequence[float]], title: str,
              xlabel: str, ylabel: str, dy: float = 0.0) -> list[str]:
    vals = [v for vs in series.values() for v in vs]
    y0, y1 = _bounds(vals, zero=True)
    pw, ph = W - ML - MR, H - MT - MB
    out = _frame(title, xlabel, ylabel, y0, y1, dy)
    gw = pw / max(len(groups), 1)
    bw = 0.8 * gw / max(len(series), 1)
    base = dy + MT + ph - ph * (0 - y0) / (y1 - y0)
    for j, g in enumerate(groups):
        out.append(f'<text x="{_f(ML + gw * (j + 0.5))}" y="{dy + MT + ph + 14}" text-anchor="middle" '
                   f'font-size="10">{escape(str(g))}</text>')
        for i, vs in enumerate(series.values()):
            top = dy + MT + ph - ph * (vs[j] - y0) / (y1 - y0)
            x = ML + gw * j + 0.1 * gw + bw * i
            out.append(f'<rect x="{_f(x)}" y="{_f(min(top, base))}" width="{_f(bw)}" height="{_f(abs(base - top))}" '
                       f'fill="{PALETTE[i % len(PALETTE)]}"/>')
    return out + _legend(list(series), dy)


def document(panels: Sequence[list[str]]) -> str:
    body = [line for p in panels for line in p]
    height = H * len(panels)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" '
        f'viewBox="0 0 {W} {height}" font-family="sans-serif">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def line_chart(series, title, xlabel, ylabel) -> str:
    return document([line_panel(series, title, xlabel, ylabel)])


def bar_chart(groups, series, title, xlabel, ylabel) -> str:
    return document([bar_panel(groups, series, title, xlabel, ylabel)])
