"""SVG and PNG views of the fundamental domain [0,1)^2.

Pictures are render-only; coordinates are written with fixed precision so
output is reproducible.
"""
from __future__ import annotations

import math

import numpy as np

from .arrangement import BLACK, WHITE, ArrangementComplex
from .dimer import DimerModel

SIZE = 480
PAD = 20
_FILL = {WHITE: "#ffffff", BLACK: "#222222"}
_GRAY = "#bdbdbd"


def _xy(p):
    return (f"{PAD + float(p[0]) * SIZE:.3f}", f"{PAD + (1 - float(p[1])) * SIZE:.3f}")


def _header(title):
    w = SIZE + 2 * PAD
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}">',
        f"<title>{title}</title>",
        "<defs>",
        f'<clipPath id="dom"><rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}"/></clipPath>',
        '<marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker>',
        "</defs>",
        f'<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#888"/>',
        '<g clip-path="url(#dom)">',
    ]


def _footer():
    return ["</g>", "</svg>", ""]


def _shifts(pts):
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    for sx in range(math.floor(-max(xs)), math.ceil(1 - min(xs)) + 1):
        for sy in range(math.floor(-max(ys)), math.ceil(1 - min(ys)) + 1):
            yield sx, sy


def _polygon(pts, fill, extra=""):
    out = []
    for sx, sy in _shifts(pts):
        coords = " ".join(",".join(_xy((p[0] + sx, p[1] + sy))) for p in pts)
        out.append(f'<polygon points="{coords}" fill="{fill}" stroke="none"{extra}/>')
    return out


def _segment(p, q, style):
    out = []
    for sx, sy in _shifts([p, q]):
        (x1, y1), (x2, y2) = _xy((p[0] + sx, p[1] + sy)), _xy((q[0] + sx, q[1] + sy))
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>')
    return out


def _arrangement_body(c: ArrangementComplex, fills=None):
    body = []
    colors = c.colors or [None] * len(c.cells)
    for k in range(len(c.cells)):
        fill = (fills or {}).get(colors[k], _FILL.get(colors[k], _GRAY))
        body += _polygon(c.cell_lift(k), fill)
    for h in c.half_edges[::2]:
        p = c.vertices[h.origin]
        q = (p[0] + h.vec[0], p[1] + h.vec[1])
        if not h.forward:
            p, q = q, p
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        body += _segment(p, mid, 'stroke="#c0392b" stroke-width="1.5" marker-end="url(#arrow)"')
        body += _segment(mid, q, 'stroke="#c0392b" stroke-width="1.5"')
    return body


def arrangement_svg(c: ArrangementComplex, title="arrangement") -> str:
    return "\n".join(_header(title) + _arrangement_body(c) + _footer())


def dimer_svg(g: DimerModel, title="dimer model") -> str:
    body = []
    for e in g.edges:
        pw, pb = g.nodes[e.w].pos, g.nodes[e.b].pos
        q = (pb[0] + e.crossing[0], pb[1] + e.crossing[1])
        body += _segment(pw, q, 'stroke="#1f4e79" stroke-width="2"')
    for n in g.nodes:
        fill = "#ffffff" if n.color == "w" else "#000000"
        for sx, sy in _shifts([n.pos]):
            x, y = _xy((n.pos[0] + sx, n.pos[1] + sy))
            body.append(f'<circle cx="{x}" cy="{y}" r="6" fill="{fill}" stroke="#000" stroke-width="1.5"/>')
    return "\n".join(_header(title) + body + _footer())


_COAMOEBA_FILLS = {WHITE: "#f6d7a7", BLACK: "#7a4b94"}


def coamoeba_svg(dec, samples=(), max_samples=2000, title="coamoeba") -> str:
    c = dec.complex
    colors = c.colors
    body = []
    for k in range(len(c.cells)):
        fill = _COAMOEBA_FILLS.get(colors[k], "#f0f0f0")
        body += _polygon(c.cell_lift(k), fill)
    for h in c.half_edges[::2]:
        p = c.vertices[h.origin]
        q = (p[0] + h.vec[0], p[1] + h.vec[1])
        if not h.forward:
            p, q = q, p
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        body += _segment(p, mid, 'stroke="#c0392b" stroke-width="1" marker-end="url(#arrow)"')
        body += _segment(mid, q, 'stroke="#c0392b" stroke-width="1"')
    for pt in list(samples)[:max_samples]:
        x, y = _xy(pt)
        body.append(f'<circle cx="{x}" cy="{y}" r="1" fill="#0b6623"/>')
    for v in dec.vertices:
        x, y = _xy(v)
        body.append(f'<circle cx="{x}" cy="{y}" r="4" fill="#c0392b"/>')
    return "\n".join(_header(title) + body + _footer())


def coamoeba_png(dec, path, resolution=512, samples=()):
    """Raster of the predicted coamoeba with the sample points overlaid."""
    from PIL import Image, ImageDraw

    from .coamoeba import predicted_grid

    cls, cell = predicted_grid(dec, resolution)
    rgb = np.full((resolution, resolution, 3), 240, dtype=np.uint8)
    colors = dec.complex.colors
    palette = {WHITE: (246, 215, 167), BLACK: (122, 75, 148)}
    for k in dec.colored_cells:
        rgb[cell == k] = palette.get(colors[k], (200, 200, 200))
    rgb[cls == 2] = (192, 57, 43)
    for x, y in samples:
        i = min(int(x * resolution), resolution - 1)
        j = min(int(y * resolution), resolution - 1)
        rgb[j, i] = (11, 102, 35)
    img = Image.fromarray(rgb[::-1].copy())
    draw = ImageDraw.Draw(img)
    c = dec.complex
    R = resolution
    for h in c.half_edges[::2]:
        p = c.vertices[h.origin]
        q = (p[0] + h.vec[0], p[1] + h.vec[1])
        for sx, sy in _shifts([p, q]):
            draw.line([(float(p[0] + sx) * R, (1 - float(p[1] + sy)) * R),
                       (float(q[0] + sx) * R, (1 - float(q[1] + sy)) * R)], fill=(192, 57, 43), width=1)
    img.save(path)
