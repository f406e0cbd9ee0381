"""Static SVG scatter plots of the (i0, i1) plane.

Output is a plain 800x800 document over the data window [-3, 3]^2, with
the quantum circle (radius 2 sqrt(2)) and the LHV square (half side 2)
drawn behind the sample markers.  Everything is emitted in one fixed
element order with fixed two-decimal pixel coordinates, so a given point
list always renders to identical bytes.
"""
from __future__ import annotations

import math

SIZE = 800
DATA_HALF = 3.0

# marker fill by star quarter; plain scans use the default
QUARTER_COLORS = {
    "i0max": "#ff8c00",
    "i0min": "#008000",
    "i1max": "#0000ff",
    "i1min": "#ff0000",
}
DEFAULT_COLOR = "#1f6fb2"


def _px(x: float) -> str:
    return "%.2f" % ((x + DATA_HALF) / (2.0 * DATA_HALF) * SIZE)


def _py(y: float) -> str:
    return "%.2f" % (SIZE - (y + DATA_HALF) / (2.0 * DATA_HALF) * SIZE)


def _scale(length: float) -> float:
    return length / (2.0 * DATA_HALF) * SIZE


def render_scatter(points, title: str = "") -> str:
    """Render ScanPoint-like objects (need .i0, .i1, .quarter) to SVG text."""
    radius = 2.0 * math.sqrt(2.0)
    half_lhv = _scale(2.0)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (SIZE, SIZE, SIZE, SIZE),
        '<rect x="0" y="0" width="%d" height="%d" fill="#ffffff"/>' % (SIZE, SIZE),
        # axes through the origin
        '<line x1="%s" y1="0" x2="%s" y2="%d" stroke="#cccccc" stroke-width="1"/>'
        % (_px(0.0), _px(0.0), SIZE),
        '<line x1="0" y1="%s" x2="%d" y2="%s" stroke="#cccccc" stroke-width="1"/>'
        % (_py(0.0), SIZE, _py(0.0)),
        # LHV square, half side 2
        '<rect x="%s" y="%s" width="%.2f" height="%.2f" fill="none" '
        'stroke="#888888" stroke-width="1.5"/>'
        % (_px(-2.0), _py(2.0), 2.0 * half_lhv, 2.0 * half_lhv),
        # quantum circle, radius 2 sqrt(2)
        '<circle cx="%s" cy="%s" r="%.2f" fill="none" stroke="#000000" '
        'stroke-width="1.5"/>' % (_px(0.0), _py(0.0), _scale(radius)),
        # tick labels in expectation units
        '<text x="%s" y="%s" font-family="monospace" font-size="14" '
        'fill="#555555">2</text>' % (_px(2.02), _py(0.08)),
        '<text x="%s" y="%s" font-family="monospace" font-size="14" '
        'fill="#555555">-2</text>' % (_px(-2.25), _py(0.08)),
        '<text x="%s" y="%s" font-family="monospace" font-size="14" '
        'fill="#555555">i0</text>' % (_px(2.72), _py(-0.25)),
        '<text x="%s" y="%s" font-family="monospace" font-size="14" '
        'fill="#555555">i1</text>' % (_px(0.06), _py(2.72)),
    ]
    if title:
        parts.append(
            '<text x="%s" y="%s" font-family="monospace" font-size="16" '
            'fill="#222222">%s</text>' % (_px(-2.95), _py(2.85), _escape(title))
        )
    for p in points:
        color = QUARTER_COLORS.get(p.quarter, DEFAULT_COLOR)
        parts.append(
            '<circle cx="%s" cy="%s" r="2" fill="%s" fill-opacity="0.6"/>'
            % (_px(p.i0), _py(p.i1), color)
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
