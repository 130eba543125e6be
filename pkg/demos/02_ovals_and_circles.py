"""
Nested ovals of a tridiagonal determinant
=========================================

For the binomial basis the determinant D_{j,k}(x, y) has k-j-1 nested
ovals.  Each oval is the set where the viewing-angle sum equals l*pi, and
for large degree the ovals approach explicit circles.
"""

import math
from pathlib import Path

import numpy as np

from galeroot.basis import BasisContext, BasisKind
from galeroot.contour import closed_count, marching_squares
from galeroot.determinant import d_eval
from galeroot.grid import FieldKind, RegionGrid, RunManifest, emit_svg
from galeroot.rootlocus import angle_sum, auto_window, limiting_circles, oval_point, shifted_points

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# D_{0,10} for degree 10: nine closed contours.
d = 10
ctx = BasisContext(BasisKind.BINOMIAL, d)
window = auto_window(d)
grid = RegionGrid.sample(lambda z: d_eval(ctx, 0, d, z), window, 600, 600, FieldKind.D_VALUE)
lines = marching_squares(grid.values, grid.xs, grid.ys)
print("closed contours of D_{0,10}:", closed_count(lines))
manifest = RunManifest("demo", "binomial", d, window=window, resolution=(600, 600))
(out / "d10_ovals.svg").write_text(emit_svg(window, [("D_0_10", lines)], manifest=manifest))

# On the real axis the determinant alternates sign at the points a_i, so
# each interval (a_i, a_{i+1}) holds a crossing of one oval.
shift, half_lengths = shifted_points(d, 0, d)
xs = float(shift) + np.array([float(a) for a in half_lengths])
print("signs of D_{0,10} at shift + a_i:", np.sign(d_eval(ctx, 0, d, xs + 0j)).astype(int))

# Each oval is a level set of the angle sum.
for l in (1, 4, 9):
    z = oval_point(d, 0, d, l, theta=1.0)
    print(f"oval {l}: point {z:.4f}, angle sum / pi = {angle_sum(ctx, 0, d, z).angle_sum / math.pi:.12f}")

# Large degree: the zeros of D_{0,4} along a ray sit on the limiting circles.
big = 200
for (c, r) in limiting_circles(big, 0, 4):
    print(f"limiting circle: centre {c:.3f}, radius {r:.3f}")
