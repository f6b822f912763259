"""Minimal static SVG output: line plots and colored band strips.

Coordinates are printed with fixed precision so identical data give
byte-identical files.
"""

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=20, top=40, bottom=50)
CLASS_COLORS = {'pp': '#c0392b', 'sc': '#27ae60', 'ac': '#2c6fbb',
                'outside': '#dddddd', 'boundary': '#8e44ad'}


def _fmt(x):
    return f"{x:.2f}"


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def _frame(title, xlabel, ylabel, xr, yr):
    x0, x1 = MARGIN['left'], WIDTH - MARGIN['right']
    y0, y1 = HEIGHT - MARGIN['bottom'], MARGIN['top']
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
           f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" '
           f'font-family="sans-serif" font-size="15">{escape(title)}</text>',
           f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
           f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
           f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
           f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>',
           f'<text x="16" y="{(y0 + y1) / 2}" text-anchor="middle" '
           f'font-family="sans-serif" font-size="13" '
           f'transform="rotate(-90 16 {(y0 + y1) / 2})">{escape(ylabel)}</text>']
    for t in _ticks(*xr):
        px = _fmt(x0 + (t - xr[0]) / (xr[1] - xr[0]) * (x1 - x0))
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{y0 + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{t:.3g}</text>')
    if yr is not None:
        for t in _ticks(*yr):
            py = _fmt(y0 - (t - yr[0]) / (yr[1] - yr[0]) * (y0 - y1))
            out.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
            out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" '
                       f'dominant-baseline="middle" font-family="sans-serif" '
                       f'font-size="11">{t:.3g}</text>')
    return out, (x0, x1, y0, y1)


def _range(v):
    lo, hi = float(np.min(v)), float(np.max(v))
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_plot(path, x, ys, title='', xlabel='', ylabel='', labels=None):
    """Write one or more curves y(x) sharing the x axis."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for y in (ys if isinstance(ys, (list, tuple)) else [ys])]
    xr = _range(x)
    yr = _range(np.concatenate(ys))
    out, (x0, x1, y0, y1) = _frame(title, xlabel, ylabel, xr, yr)
    palette = ['#2c6fbb', '#c0392b', '#27ae60', '#8e44ad']
    for i, y in enumerate(ys):
        px = x0 + (x - xr[0]) / (xr[1] - xr[0]) * (x1 - x0)
        py = y0 - (y - yr[0]) / (yr[1] - yr[0]) * (y0 - y1)
        pts = ' '.join(f'{_fmt(a)},{_fmt(b)}' for a, b in zip(px, py))
        out.append(f'<polyline fill="none" stroke="{palette[i % 4]}" '
                   f'stroke-width="1.5" points="{pts}"/>')
        if labels:
            out.append(f'<text x="{x1 - 10}" y="{y1 + 16 * (i + 1)}" text-anchor="end" '
                       f'font-family="sans-serif" font-size="12" '
                       f'fill="{palette[i % 4]}">{escape(labels[i])}</text>')
    out.append('</svg>')
    _write(path, out)


def band_plot(path, segments, lam_range, title='', xlabel='lambda'):
    """Colored strip: ``segments`` is a list of (lo, hi, class_name)."""
    out, (x0, x1, y0, y1) = _frame(title, xlabel, '', lam_range, None)
    top = y1 + 0.35 * (y0 - y1)
    h = 0.3 * (y0 - y1)
    span = lam_range[1] - lam_range[0]
    for lo, hi, cls in segments:
        a = x0 + (lo - lam_range[0]) / span * (x1 - x0)
        b = x0 + (hi - lam_range[0]) / span * (x1 - x0)
        out.append(f'<rect x="{_fmt(a)}" y="{_fmt(top)}" width="{_fmt(max(b - a, 0.5))}" '
                   f'height="{_fmt(h)}" fill="{CLASS_COLORS.get(cls, "#000000")}"/>')
    for i, (cls, col) in enumerate(CLASS_COLORS.items()):
        out.append(f'<rect x="{x0 + 90 * i}" y="{y1}" width="12" height="12" fill="{col}"/>')
        out.append(f'<text x="{x0 + 90 * i + 16}" y="{y1 + 10}" font-family="sans-serif" '
                   f'font-size="12">{cls}</text>')
    out.append('</svg>')
    _write(path, out)


def _write(path, lines):
    with open(path, 'w') as fh:
        fh.write('\n'.join(lines) + '\n')
