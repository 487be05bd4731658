from __future__ import annotations

import pytest

from quiver import build_folding
from svg_utils import SVG, emit_svg, figure_objects, fmt, plane_point


def test_fmt() -> None:
    assert fmt(-0.0) == '0'
    assert fmt(1.5) == '1.5'
    assert fmt(2.0 / 3.0, 4) == '0.6667'


def test_empty_figure_renders() -> None:
    text = SVG().render()
    assert text.startswith('<?xml')
    assert text.rstrip().endswith('</svg>')


def test_text_is_escaped() -> None:
    svg = SVG()
    svg.text(0.0, 0.0, "<a&b>")
    assert "&lt;a&amp;b&gt;" in svg.render()


def test_emit_is_deterministic(tmp_path) -> None:
    folding = build_folding('A7')
    first = emit_svg(folding, 'module')
    assert first == emit_svg(folding, 'module')
    path = tmp_path / "a7.svg"
    assert emit_svg(folding, 'module', str(path)) == first
    assert path.read_text(encoding='utf-8') == first


@pytest.mark.parametrize("layer", ['module', 'derived', 'cluster'])
def test_layers_label_every_object(a7, layer: str) -> None:
    text = emit_svg(build_folding('A7'), layer)
    assert text.count('<text ') == len(figure_objects(a7, layer))
    assert "[0 2/1]" in text


def test_row_radii(d5) -> None:
    text = emit_svg(build_folding('D5'), 'module', scale=40.0)
    # vertex 0 has weight 2
    assert 'r="80"' in text
    x, y = plane_point(d5, d5.injective('0'), 40.0)
    assert x == pytest.approx(80.0)
    assert y == pytest.approx(0.0)


def test_unknown_layer() -> None:
    with pytest.raises(ValueError):
        emit_svg(build_folding('A7'), 'stable')
