"""Two-panel bubble plot of a 2x2 table before and after uniformization.

Circle area is proportional to cell probability, so radii scale with the
square root. Output is plain SVG 1.1 text built from formatted strings; equal
inputs give byte-identical files.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .tables import Labels, Table2, normalize

CELL = 110.0
MARGIN_LEFT = 110.0
MARGIN_TOP = 80.0
PANEL_WIDTH = MARGIN_LEFT + 2 * CELL + 30.0
HEIGHT = MARGIN_TOP + 2 * CELL + 60.0
# a cell holding all the mass gets a circle just inside its square
MAX_RADIUS = CELL / 2 - 4.0

CAPTIONS = ("Original data", "Transformed data")


@dataclass(frozen=True)
class Bubble:
    row: int
    col: int
    cx: float
    cy: float
    r: float
    p: float


@dataclass(frozen=True)
class Panel:
    title: str
    x0: float
    labels: Labels
    bubbles: tuple[Bubble, ...]


@dataclass(frozen=True)
class PlotSpec:
    width: float
    height: float
    panels: tuple[Panel, ...]


def _panel(t: Table2, title: str, x0: float) -> Panel:
    p = normalize(t).cells
    labels = t.labels or Labels.default(2)
    bubbles = []
    for i in range(2):
        for j in range(2):
            bubbles.append(
                Bubble(
                    row=i,
                    col=j,
                    cx=x0 + MARGIN_LEFT + (j + 0.5) * CELL,
                    cy=MARGIN_TOP + (i + 0.5) * CELL,
                    r=MAX_RADIUS * float(np.sqrt(p[i, j])),
                    p=float(p[i, j]),
                )
            )
    return Panel(title, x0, labels, tuple(bubbles))


def plot_spec(before: Table2, after: Table2) -> PlotSpec:
    for t in (before, after):
        if not isinstance(t, Table2):
            raise ValueError("bubble plot supports 2x2 tables only")
    panels = (
        _panel(before, CAPTIONS[0], 0.0),
        _panel(after, CAPTIONS[1], PANEL_WIDTH),
    )
    return PlotSpec(width=2 * PANEL_WIDTH, height=HEIGHT, panels=panels)


def _n(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _text(x, y, s, anchor="middle", size=13, extra=""):
    return (
        f'<text x="{_n(x)}" y="{_n(y)}" text-anchor="{anchor}" font-size="{size}"{extra}>'
        f"{escape(s)}</text>"
    )


def render_svg(spec: PlotSpec) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_n(spec.width)}" '
        f'height="{_n(spec.height)}" viewBox="0 0 {_n(spec.width)} {_n(spec.height)}" '
        'font-family="sans-serif">',
        f'<rect x="0" y="0" width="{_n(spec.width)}" height="{_n(spec.height)}" fill="white"/>',
    ]
    for k, panel in enumerate(spec.panels):
        gx = panel.x0 + MARGIN_LEFT
        row_axis, col_axis = panel.labels.axes
        out.append(f'<g id="panel-{k}" class="panel">')
        # light grid
        for m in range(3):
            out.append(
                f'<line x1="{_n(gx)}" y1="{_n(MARGIN_TOP + m * CELL)}" x2="{_n(gx + 2 * CELL)}" '
                f'y2="{_n(MARGIN_TOP + m * CELL)}" stroke="#dddddd" stroke-width="1"/>'
            )
            out.append(
                f'<line x1="{_n(gx + m * CELL)}" y1="{_n(MARGIN_TOP)}" x2="{_n(gx + m * CELL)}" '
                f'y2="{_n(MARGIN_TOP + 2 * CELL)}" stroke="#dddddd" stroke-width="1"/>'
            )
        out.append(_text(gx + CELL, MARGIN_TOP - 34, col_axis, size=14, extra=' font-weight="bold"'))
        for j, name in enumerate(panel.labels.levels[1]):
            out.append(_text(gx + (j + 0.5) * CELL, MARGIN_TOP - 12, name))
        out.append(_text(panel.x0 + 14, MARGIN_TOP - 12, row_axis, anchor="start", size=14, extra=' font-weight="bold"'))
        for i, name in enumerate(panel.labels.levels[0]):
            out.append(_text(gx - 12, MARGIN_TOP + (i + 0.5) * CELL + 4, name, anchor="end"))
        for b in panel.bubbles:
            out.append(
                f'<circle cx="{_n(b.cx)}" cy="{_n(b.cy)}" r="{_n(b.r)}" fill="#4878a8" '
                f'fill-opacity="0.75" stroke="#274b70" stroke-width="1" '
                f'data-cell={quoteattr(f"{b.row}{b.col}")} data-p="{b.p:.6f}"/>'
            )
        out.append(_text(gx + CELL, MARGIN_TOP + 2 * CELL + 36, f"({'ab'[k]}) {panel.title}", size=14))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bubble_svg(before: Table2, after: Table2) -> str:
    return render_svg(plot_spec(before, after))
