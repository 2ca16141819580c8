"""Static SVG rendering of 2-D ball datasets.

Output is a plain string built with fixed-precision formatting, so the
bytes are deterministic for identical inputs and flags.
"""

from __future__ import annotations

import numpy as np

from .errors import PointValidationError

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def render_svg(points, labels=None, directions=None, size: int = 480, margin: int = 24) -> str:
    """Unit disk with point markers, optional labels and direction chords.

    Ball coordinates map linearly onto the viewport; each fitted ideal
    direction is drawn as the diameter through the origin toward it.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 2:
        raise PointValidationError("plotting needs 2-D points; reduce the data first")
    if labels is not None and len(labels) != points.shape[0]:
        raise PointValidationError("label count does not match point count")
    half = (size - 2 * margin) / 2.0
    cx = cy = size / 2.0

    def sx(x: float) -> str:
        return _fmt(cx + half * x)

    def sy(y: float) -> str:
        return _fmt(cy - half * y)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(half)}" '
        'fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    if directions is not None:
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        for i, p in enumerate(directions):
            color = _PALETTE[i % len(_PALETTE)]
            lines.append(
                f'<line x1="{sx(-p[0])}" y1="{sy(-p[1])}" x2="{sx(p[0])}" y2="{sy(p[1])}" '
                f'stroke="{color}" stroke-width="1" stroke-dasharray="6,4"/>'
            )
    color_of = {}
    if labels is not None:
        for name in labels:
            if name not in color_of:
                color_of[name] = _PALETTE[len(color_of) % len(_PALETTE)]
    for i, (x, y) in enumerate(points):
        color = color_of.get(labels[i], "#1f77b4") if labels is not None else "#1f77b4"
        lines.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="3" fill="{color}"/>')
        if labels is not None:
            lines.append(
                f'<text x="{sx(x)}" y="{sy(y)}" dx="5" dy="-5" font-size="10" '
                f'fill="{color}">{labels[i]}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
