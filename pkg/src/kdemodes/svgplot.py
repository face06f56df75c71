"""Minimal self-contained SVG rendering: heatmaps, polylines, mode trees.

No styling framework, no external assets; the files are small, diffable
and open anywhere.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["heatmap_svg", "polyline_chart_svg", "mode_tree_svg"]

_MARGIN = 50.0


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">'
    )
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + body + ["</svg>"])


def _text(x, y, s, size=11, anchor="middle") -> str:
    return (
        f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" '
        f'font-family="sans-serif" text-anchor="{anchor}">{s}</text>'
    )


def _grey(level: int, max_level: int = 6) -> str:
    # light grey for one mode, black for max_level and beyond
    level = max(1, min(level, max_level))
    shade = int(220 - (level - 1) * (220 / (max_level - 1)))
    return f"rgb({shade},{shade},{shade})"


def heatmap_svg(x_values, y_values, counts, x_label: str, y_label: str, title: str) -> str:
    """Greyscale count matrix; rows follow y_values, columns x_values.

    Rendered with the y axis increasing upward.
    """
    counts = np.asarray(counts)
    ny, nx = counts.shape
    plot_w, plot_h = 640.0, 480.0
    width, height = plot_w + 2 * _MARGIN, plot_h + 2 * _MARGIN
    cw, ch = plot_w / nx, plot_h / ny
    body = []
    for i in range(ny):
        y = _MARGIN + plot_h - (i + 1) * ch
        row = counts[i]
        j = 0
        while j < nx:
            k = j
            while k + 1 < nx and row[k + 1] == row[j]:
                k += 1
            x = _MARGIN + j * cw
            body.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw * (k - j + 1) + 0.2:.2f}" '
                f'height="{ch + 0.2:.2f}" fill="{_grey(int(row[j]))}"/>'
            )
            j = k + 1
    body.append(_text(width / 2, _MARGIN / 2, title, size=13))
    body.append(_text(width / 2, height - 8, x_label))
    body.append(_text(14, height / 2, y_label, anchor="middle"))
    for frac in (0.0, 0.5, 1.0):
        xv = x_values[0] + frac * (x_values[-1] - x_values[0])
        yv = y_values[0] + frac * (y_values[-1] - y_values[0])
        body.append(_text(_MARGIN + frac * plot_w, height - _MARGIN + 16, f"{xv:.3g}"))
        body.append(_text(_MARGIN - 6, _MARGIN + plot_h - frac * plot_h + 4, f"{yv:.3g}", anchor="end"))
    return _svg(width, height, body)


def polyline_chart_svg(
    series,
    x_label: str,
    y_label: str,
    title: str,
    diagonal: bool = False,
    y_range=None,
) -> str:
    """Line chart for (label, xs, ys) series with automatic bounds."""
    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    x0, x1 = float(np.min(all_x)), float(np.max(all_x))
    if y_range is not None:
        y0, y1 = y_range
    else:
        y0, y1 = float(np.min(all_y)), float(np.max(all_y))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    plot_w, plot_h = 560.0, 420.0
    width, height = plot_w + 2 * _MARGIN, plot_h + 2 * _MARGIN

    def px(x):
        return _MARGIN + (x - x0) / (x1 - x0) * plot_w

    def py(y):
        return _MARGIN + plot_h - (y - y0) / (y1 - y0) * plot_h

    body = [
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    ]
    if diagonal:
        lo, hi = max(x0, y0), min(x1, y1)
        if hi > lo:
            body.append(
                f'<line x1="{px(lo):.1f}" y1="{py(lo):.1f}" x2="{px(hi):.1f}" '
                f'y2="{py(hi):.1f}" stroke="grey" stroke-dasharray="4 3"/>'
            )
    dashes = ["none", "6 3", "2 2", "8 2 2 2", "4 4"]
    for k, (label, xs, ys) in enumerate(series):
        pts = " ".join(f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(xs, ys))
        dash = dashes[k % len(dashes)]
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="black" '
            f'stroke-width="1.4" stroke-dasharray="{dash}"/>'
        )
        body.append(_text(width - _MARGIN + 4, _MARGIN + 14 * (k + 1), label, size=10, anchor="end"))
    body.append(_text(width / 2, _MARGIN / 2, title, size=13))
    body.append(_text(width / 2, height - 8, x_label))
    body.append(_text(14, height / 2, y_label))
    for frac in (0.0, 0.5, 1.0):
        body.append(_text(px(x0 + frac * (x1 - x0)), height - _MARGIN + 16, f"{x0 + frac * (x1 - x0):.3g}"))
        body.append(_text(_MARGIN - 6, py(y0 + frac * (y1 - y0)) + 4, f"{y0 + frac * (y1 - y0):.3g}", anchor="end"))
    return _svg(width, height, body)


def mode_tree_svg(tree, title: str) -> str:
    """Mode locations against log bandwidth, one polyline per track."""
    h_lo = float(tree.h_grid[-1])
    h_hi = float(tree.h_grid[0])
    locs = [loc for t in tree.tracks for _, loc in t.path]
    x0, x1 = min(locs), max(locs)
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    pad = 0.06 * (x1 - x0)
    x0, x1 = x0 - pad, x1 + pad
    plot_w, plot_h = 560.0, 420.0
    width, height = plot_w + 2 * _MARGIN, plot_h + 2 * _MARGIN

    def px(x):
        return _MARGIN + (x - x0) / (x1 - x0) * plot_w

    def py(h):
        return _MARGIN + plot_h - (math.log(h) - math.log(h_lo)) / (
            math.log(h_hi) - math.log(h_lo)
        ) * plot_h

    body = [
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    ]
    for t in tree.tracks:
        pts = " ".join(f"{px(loc):.2f},{py(h):.2f}" for h, loc in t.path)
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.2"/>'
        )
        if t.parent_id is not None:
            # connect the birth point to the parent's location at birth
            parent = tree.tracks[t.parent_id]
            h_birth, loc_birth = t.path[0]
            ploc = _location_at(parent, h_birth)
            if ploc is not None:
                body.append(
                    f'<line x1="{px(loc_birth):.2f}" y1="{py(h_birth):.2f}" '
                    f'x2="{px(ploc):.2f}" y2="{py(h_birth):.2f}" '
                    'stroke="grey" stroke-width="0.8" stroke-dasharray="2 2"/>'
                )
    body.append(_text(width / 2, _MARGIN / 2, title, size=13))
    body.append(_text(width / 2, height - 8, "location"))
    body.append(_text(14, height / 2, "bandwidth (log)"))
    for frac in (0.0, 0.5, 1.0):
        hv = math.exp(math.log(h_lo) + frac * (math.log(h_hi) - math.log(h_lo)))
        body.append(_text(_MARGIN - 6, py(hv) + 4, f"{hv:.3g}", anchor="end"))
        xv = x0 + frac * (x1 - x0)
        body.append(_text(px(xv), height - _MARGIN + 16, f"{xv:.3g}"))
    return _svg(width, height, body)


def _location_at(track, h: float):
    best = None
    for hp, loc in track.path:
        if best is None or abs(hp - h) < abs(best[0] - h):
            best = (hp, loc)
    if best is None:
        return None
    return best[1]
