"""
SVG Figures
Projections of AR quivers onto the I2(2n) root plane: concentric 2n-gon arcs
with one radius per row weight, labelled objects and irreducible maps.
"""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from armodel import ARModel, Indec, ar_model
from quiver import Folding

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg
    width="%(width)s"
    height="%(height)s"
    viewBox="0 0 %(width)s %(height)s"
    version="1.1"
    xmlns="http://www.w3.org/2000/svg">
<g transform="translate(%(trans_x)s,%(trans_y)s)">
<rect x="%(neg_trans_x)s" y="%(neg_trans_y)s" width="%(width)s" height="%(height)s" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</g></svg>
"""

# row colours, cycled
COLORS = [
    '#4c72b0', '#dd8452', '#55a868', '#c44e52',
    '#8172b3', '#937860', '#da8bc3', '#8c8c8c',
]

DIGITS = 12


def fmt(value: float, digits: int = DIGITS) -> str:
    text = '%.*g' % (digits, value)
    return '0' if text == '-0' else text


class SVG:
    def __init__(self, digits: int = DIGITS):
        self.digits = digits
        self.min_x = None
        self.max_x = None
        self.min_y = None
        self.max_y = None
        self.commands: List[str] = []

    def _f(self, value: float) -> str:
        return fmt(value, self.digits)

    def require(self, x, y):
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def circle(self, x, y, radius, stroke='#000000', fill='none'):
        self.require(x - radius, y - radius)
        self.require(x + radius, y + radius)
        self.commands.append(
            '<circle cx="%s" cy="%s" r="%s" style="fill:%s;stroke:%s;stroke-width:0.5"/>'
            % (self._f(x), self._f(y), self._f(radius), fill, stroke)
        )

    def line(self, points, color='#000000', width=1.0, dashed=False):
        for x, y in points:
            self.require(x, y)
        dash = ';stroke-dasharray:4,3' if dashed else ''
        self.commands.append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%s%s"/>' % (
                ' '.join('%s,%s' % (self._f(x), self._f(y)) for x, y in points),
                color,
                self._f(width),
                dash,
            )
        )

    def arrow(self, start, end, color='#666666', shorten=6.0):
        """A segment with an open head, both ends pulled in by `shorten`"""
        (x0, y0), (x1, y1) = start, end
        length = math.hypot(x1 - x0, y1 - y0)
        if length <= 2 * shorten:
            return
        ux, uy = (x1 - x0) / length, (y1 - y0) / length
        a = (x0 + ux * shorten, y0 + uy * shorten)
        b = (x1 - ux * shorten, y1 - uy * shorten)
        self.line([a, b], color, 0.75)
        head = 4.0
        left = (b[0] - head * ux + head * 0.5 * uy, b[1] - head * uy - head * 0.5 * ux)
        right = (b[0] - head * ux - head * 0.5 * uy, b[1] - head * uy + head * 0.5 * ux)
        self.line([left, b, right], color, 0.75)

    def text(self, x, y, text, color='#222222', size=9):
        self.require(x, y - size)
        self.require(x + len(text) * size * 0.6, y)
        self.commands.append(
            '<text x="%s" y="%s" fill="%s" font-size="%d" font-family="monospace" xml:space="preserve">%s</text>'
            % (self._f(x), self._f(y), color, size, _escape(text))
        )

    def render(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1.0) * 0.05
        width = self._f(self.max_x - self.min_x + pad * 2)
        height = self._f(self.max_y - self.min_y + pad * 2)
        trans_x = self._f(-self.min_x + pad)
        trans_y = self._f(-self.min_y + pad)
        neg_trans_x = self._f(self.min_x - pad)
        neg_trans_y = self._f(self.min_y - pad)
        body = ''.join(item + '\n' for item in self.commands)
        return PREAMBLE % locals() + body + POSTAMBLE

    def save(self, filename):
        with open(filename, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.render())


def _escape(text: str) -> str:
    return text.replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;')


# -------------------------
# Root plane
# -------------------------
def plane_basis(model: ARModel) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Euclidean images of the simple roots: |α0| = λ, |α1| = λθ, angle π - π/2n"""
    n = model.n
    lam = float(model.folding.ftype.lam)
    theta = 2 * math.cos(math.pi / (2 * n))
    angle = math.pi - math.pi / (2 * n)
    return (lam, 0.0), (lam * theta * math.cos(angle), lam * theta * math.sin(angle))


def plane_point(model: ARModel, x: Indec, scale: float) -> Tuple[float, float]:
    a, b = model.dimproj(x)
    (ax, ay), (bx, by) = plane_basis(model)
    fa, fb = float(a), float(b)
    # SVG y grows downwards
    return scale * (fa * ax + fb * bx), -scale * (fa * ay + fb * by)


def figure_objects(model: ARModel, layer: str) -> List[Indec]:
    if layer == 'module':
        return model.module_indecs()
    if layer == 'derived':
        return model.enumerate_indecs('derived', shifts=(0, 1))
    if layer == 'cluster':
        return model.enumerate_indecs('cluster')
    raise ValueError(f"unknown layer {layer!r}")


def ar_figure(model: ARModel, layer: str = 'module', scale: float = 40.0,
              digits: int = DIGITS) -> SVG:
    """
    Draw the projected AR quiver of a layer.

    Args:
        model: AR model of the folding
        layer: 'module', 'derived' or 'cluster'
        scale: pixels per unit length of the root plane
        digits: significant digits of every coordinate
    """
    svg = SVG(digits)
    objects = figure_objects(model, layer)
    points: Dict[Indec, Tuple[float, float]] = {x: plane_point(model, x, scale) for x in objects}

    # arcs: one polyline per row and shift, radius w(i)
    for r, v in enumerate(model.vertices):
        color = COLORS[r % len(COLORS)]
        shifts = sorted({x.shift for x in objects if x.vertex == v and not x.shifted_projective})
        for shift in shifts:
            row = sorted((x for x in objects if x.vertex == v and x.shift == shift and not x.shifted_projective),
                         key=lambda x: x.m)
            svg.line([points[x] for x in row], color, 1.0)
        svg.circle(0.0, 0.0, float(model.folding.weight(v)) * scale, '#dddddd')

    # irreducible maps inside each shift
    for x in objects:
        if x.shifted_projective:
            continue
        base = Indec('module', x.vertex, x.m)
        for e in model.mesh_predecessors(base):
            source = Indec(x.layer, e.vertex, e.m, x.shift)
            if source in points:
                svg.arrow(points[source], points[x])

    svg.circle(0.0, 0.0, 2.0, '#000000', '#000000')
    for x in objects:
        px, py = points[x]
        svg.circle(px, py, 2.5, '#000000', '#ffffff')
        svg.text(px + 4.0, py - 4.0, model.name(x))
    return svg


def emit_svg(folding: Folding, layer: str, path: Optional[str] = None, scale: float = 40.0,
             digits: int = DIGITS) -> str:
    """Render the figure of a folding, write it to path when given, and return the text"""
    model = ar_model(folding.ftype)
    text = ar_figure(model, layer, scale, digits).render()
    if path is not None:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    return text
