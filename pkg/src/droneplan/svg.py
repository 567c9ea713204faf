"""Minimal deterministic SVG rendering for tour maps and sweep charts.

Numbers are written with fixed precision so identical inputs give
byte-identical documents. Only tours use ``<path>`` elements.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from droneplan.planner import Plan

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)

WIDTH, HEIGHT, MARGIN, LEGEND_W = 800, 800, 60, 180


def tour_color(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Frame:
    """Maps data coordinates into the plotting box with equal or free aspect."""

    def __init__(self, xy: np.ndarray, width: int, height: int, equal: bool = True):
        if len(xy):
            lo, hi = xy.min(axis=0), xy.max(axis=0)
        else:
            lo, hi = np.zeros(2), np.ones(2)
        span = np.where(hi - lo > 0, hi - lo, 1.0)
        self.lo, self.hi = lo, lo + span
        self.box_w, self.box_h = width - 2 * MARGIN, height - 2 * MARGIN
        sx, sy = self.box_w / span[0], self.box_h / span[1]
        if equal:
            sx = sy = min(sx, sy)
        self.sx, self.sy = sx, sy
        self.height = height

    def __call__(self, x: float, y: float) -> tuple[str, str]:
        px = MARGIN + (x - self.lo[0]) * self.sx
        py = self.height - MARGIN - (y - self.lo[1]) * self.sy
        return _f(px), _f(py)

    def axes(self, xlabel: str, ylabel: str) -> list[str]:
        x0, y0 = MARGIN, self.height - MARGIN
        out = [
            f'<line x1="{x0}" y1="{y0}" x2="{x0 + self.box_w}" y2="{y0}" stroke="black"/>',
            f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y0 - self.box_h}" stroke="black"/>',
            f'<text x="{x0}" y="{y0 + 16}" font-size="11">{_f(self.lo[0])}</text>',
            f'<text x="{x0 + self.box_w}" y="{y0 + 16}" font-size="11" text-anchor="end">{_f(self.hi[0])}</text>',
            f'<text x="{x0 - 4}" y="{y0}" font-size="11" text-anchor="end">{_f(self.lo[1])}</text>',
            f'<text x="{x0 - 4}" y="{y0 - self.box_h + 10}" font-size="11" text-anchor="end">{_f(self.hi[1])}</text>',
            f'<text x="{x0 + self.box_w / 2:.2f}" y="{y0 + 36}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>',
            f'<text x="14" y="{y0 - self.box_h / 2:.2f}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 14 {y0 - self.box_h / 2:.2f})">{escape(ylabel)}</text>',
        ]
        return out


def _document(width: int, height: int, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
    )
    return head + "\n".join(body) + ("\n" if body else "") + "</svg>\n"


def emit_svg(plan: Plan | None, points=None, pois=None, sites=None) -> str:
    """Map of tours over the monitoring area.

    ``points`` are the planar coordinates the tour indices refer to; ``pois``
    (grey dots) and ``sites`` (all candidate sites, faint) are optional
    ``(n, 2)`` arrays. The legend lists the cost of each tour in km.
    """
    pts = np.zeros((0, 2)) if points is None else np.asarray(points, dtype=float).reshape(-1, 2)
    poi_xy = np.zeros((0, 2)) if pois is None else np.asarray(pois, dtype=float).reshape(-1, 2)
    site_xy = np.zeros((0, 2)) if sites is None else np.asarray(sites, dtype=float).reshape(-1, 2)
    tours = plan.tours if plan is not None else ()

    frame = _Frame(np.vstack([pts, poi_xy, site_xy]), WIDTH, HEIGHT)
    body = frame.axes("x [m]", "y [m]")
    for x, y in site_xy:
        px, py = frame(x, y)
        body.append(f'<circle cx="{px}" cy="{py}" r="0.6" fill="#dddddd"/>')
    for x, y in poi_xy:
        px, py = frame(x, y)
        body.append(f'<circle cx="{px}" cy="{py}" r="1.2" fill="#999999"/>')
    for idx, tour in enumerate(tours):
        coords = [frame(*pts[i]) for i in tour.order]
        d = "M " + " L ".join(f"{px},{py}" for px, py in coords) + " Z"
        color = tour_color(idx)
        body.append(f'<path class="tour" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for px, py in coords:
            body.append(f'<circle cx="{px}" cy="{py}" r="2.5" fill="{color}"/>')
    lx = WIDTH + 10
    for idx, tour in enumerate(tours):
        y = MARGIN + 16 * idx
        body.append(f'<rect x="{lx}" y="{y}" width="10" height="10" fill="{tour_color(idx)}"/>')
        body.append(f'<text x="{lx + 14}" y="{y + 9}" font-size="11">tour {idx}: {tour.cost / 1000:.2f} km</text>')
    return _document(WIDTH + LEGEND_W, HEIGHT, body)


def emit_line_chart(xs, ys, xlabel: str, ylabel: str) -> str:
    """Polyline chart with markers, e.g. tour count against travel budget."""
    xy = np.column_stack([np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)]).reshape(-1, 2)
    width, height = 640, 480
    frame = _Frame(xy, width, height, equal=False)
    body = frame.axes(xlabel, ylabel)
    coords = [frame(x, y) for x, y in xy]
    if coords:
        body.append(
            '<polyline points="' + " ".join(f"{px},{py}" for px, py in coords) + '" fill="none" stroke="#1f77b4"/>'
        )
    for (px, py), (x, y) in zip(coords, xy):
        body.append(f'<circle cx="{px}" cy="{py}" r="3" fill="#1f77b4"/>')
        body.append(f'<text x="{px}" y="{float(py) - 6:.2f}" font-size="10" text-anchor="middle">{y:g}</text>')
    return _document(width, height, body)
