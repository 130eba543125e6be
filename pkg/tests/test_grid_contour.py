import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from galeroot.basis import BasisContext, BasisKind
from galeroot.contour import closed_count, marching_squares
from galeroot.determinant import d_eval
from galeroot.rootlocus import auto_window
from galeroot.grid import FieldKind, RegionGrid, RunManifest, emit_csv, emit_svg, parse_csv


def circle_field(n=101):
    xs = np.linspace(-2, 2, n)
    ys = np.linspace(-2, 2, n)
    return xs, ys, xs[None, :] ** 2 + ys[:, None] ** 2 - 1


def test_circle_is_one_closed_loop():
    xs, ys, F = circle_field()
    lines = marching_squares(F, xs, ys)
    assert len(lines) == 1 and lines[0].closed
    r = np.hypot(*lines[0].points.T)
    assert np.max(np.abs(r - 1)) < 2e-3


def test_open_line_hits_boundary():
    xs = np.linspace(-1, 1, 30)
    ys = np.linspace(-1, 1, 20)
    lines = marching_squares(xs[None, :] + 0 * ys[:, None] - 0.1, xs, ys)
    assert len(lines) == 1 and not lines[0].closed
    assert np.allclose(lines[0].points[:, 0], 0.1)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        marching_squares(np.zeros((3, 4)), np.arange(3), np.arange(4))


def _pointset(lines):
    return {tuple(np.round(p, 12)) for ln in lines for p in ln.points}


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (9, 11), elements=st.one_of(st.floats(-1, -1e-3), st.floats(1e-3, 1))))
def test_negated_field_gives_same_curves(F):
    xs, ys = np.linspace(0, 1, 11), np.linspace(0, 1, 9)
    assert _pointset(marching_squares(F, xs, ys)) == _pointset(marching_squares(-F, xs, ys))


def test_nested_oval_count():
    ctx = BasisContext(BasisKind.BINOMIAL, 6)
    grid = RegionGrid.sample(lambda z: d_eval(ctx, 0, 6, z), auto_window(6), 300, 300, FieldKind.D_VALUE)
    assert closed_count(marching_squares(grid.values, grid.xs, grid.ys)) == 5


windows = st.tuples(st.floats(-50, 0), st.floats(0.1, 50), st.floats(-50, 0), st.floats(0.1, 50)).map(
    lambda t: (t[0], t[0] + t[1], t[2], t[2] + t[3]))


@settings(max_examples=40, deadline=None)
@given(windows, st.integers(2, 7), st.integers(2, 7), st.data())
def test_csv_round_trip(window, nx, ny, data):
    kind = data.draw(st.sampled_from(list(FieldKind)))
    if kind in (FieldKind.EXCLUDED, FieldKind.EXCLUDED_CONSTRAINED):
        vals = data.draw(arrays(bool, (ny, nx)))
    else:
        vals = data.draw(arrays(np.float64, (ny, nx), elements=st.floats(-1e300, 1e300)))
    grid = RegionGrid(window, nx, ny, vals, kind)
    text = emit_csv(grid, RunManifest("region", "binomial", 4, seed=3, argv=["region"]))
    back, manifest = parse_csv(text)
    assert back == grid
    assert manifest.seed == 3 and manifest.argv == ["region"]
    assert emit_csv(back, manifest) == text


def test_grid_validation():
    with pytest.raises(ValueError):
        RegionGrid((0, 1, 0, 1), 1, 5, np.zeros(5))
    with pytest.raises(ValueError):
        RegionGrid((1, 0, 0, 1), 2, 2, np.zeros(4))


def test_svg_layout():
    xs, ys, F = circle_field(41)
    manifest = RunManifest("curves", "binomial", 3, argv=["curves", "--out", "x"])
    svg = emit_svg((-2, 2, -2, 2), [("D_0_3", marching_squares(F, xs, ys))],
                   points=np.array([0.5 + 1j]), manifest=manifest)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'viewBox="-2 -2 4 4"' in svg
    assert svg.count("<path") == 1 and 'class="D_0_3"' in svg
    # y is flipped: the point at +1 imaginary part sits at cy=-1
    assert 'cy="-1"' in svg
    assert "--" not in svg.split("<!--", 1)[1].split("-->", 1)[0]
