"""Plain-text SVG drawings of regions in the ``(theta_1, theta_0)`` plane."""

from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .polytope import ConvexRegion2D

SIZE = 420
MARGIN = 50
EXTENT = 1.1

PALETTE = ("#b0b0b0", "#f4a340", "#202020", "#5b8cc9", "#7fb069")


def _px(x, y):
    scale = (SIZE - 2 * MARGIN) / EXTENT
    return MARGIN + float(x) * scale, SIZE - MARGIN - float(y) * scale


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _label(v) -> str:
    return f"{float(v):.3f}"


def render(layers: Sequence[tuple[str, ConvexRegion2D]], lines: Iterable[tuple] = (),
           x_label: str = "theta1", y_label: str = "theta0", title: str = "") -> str:
    """Draw ``layers`` (name, region) back to front over the unit simplex.

    ``lines`` are extra constraint lines ``((a, b), c)`` meaning
    ``a * x + b * y = c``, clipped to the drawing area. Each region's
    vertices are annotated with their coordinates.
    """
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="10">']
    if title:
        out.append(f'<text x="{SIZE // 2}" y="18" text-anchor="middle" font-size="12">{escape(title)}</text>')
    ox, oy = _px(0, 0)
    ex, _ = _px(EXTENT, 0)
    _, ey = _px(0, EXTENT)
    out.append(f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{_fmt(ex)}" y2="{_fmt(oy)}" stroke="black"/>')
    out.append(f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{_fmt(ox)}" y2="{_fmt(ey)}" stroke="black"/>')
    out.append(f'<text x="{_fmt(ex)}" y="{_fmt(oy + 30)}" text-anchor="end">{escape(x_label)}</text>')
    out.append(f'<text x="{_fmt(ox - 10)}" y="{_fmt(ey - 8)}">{escape(y_label)}</text>')
    ax, ay = _px(1, 0)
    bx, by = _px(0, 1)
    out.append(f'<polygon points="{_fmt(ox)},{_fmt(oy)} {_fmt(ax)},{_fmt(ay)} {_fmt(bx)},{_fmt(by)}" '
               f'fill="none" stroke="#888" stroke-dasharray="4 3"/>')
    for (a, b), c in lines:
        pts = _clip_line(float(a), float(b), float(c))
        if pts:
            (x1, y1), (x2, y2) = (_px(*p) for p in pts)
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                       f'stroke="#444" stroke-width="1.5"/>')
    labelled = set()
    for k, (name, region) in enumerate(layers):
        colour = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (_px(*v) for v in region.vertices))
        out.append(f'<polygon points="{pts}" fill="{colour}" fill-opacity="0.6" stroke="{colour}">'
                   f'<title>{escape(name)}</title></polygon>')
        for v in region.vertices:
            key = (_label(v[0]), _label(v[1]))
            if key in labelled or key == ("0.000", "0.000"):
                continue
            labelled.add(key)
            px, py = _px(*v)
            out.append(f'<text x="{_fmt(px + 3)}" y="{_fmt(py - 3)}">({key[0]}, {key[1]})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _clip_line(a, b, c):
    pts = []
    lo, hi = 0.0, EXTENT
    if b:
        for x in (lo, hi):
            y = (c - a * x) / b
            if lo <= y <= hi:
                pts.append((x, y))
    if a:
        for y in (lo, hi):
            x = (c - b * y) / a
            if lo <= x <= hi:
                pts.append((x, y))
    pts = sorted(set(pts))
    return (pts[0], pts[-1]) if len(pts) >= 2 else None
