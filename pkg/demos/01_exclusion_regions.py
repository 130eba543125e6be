"""
Where can a polynomial with nonnegative coefficients vanish?
============================================================

A polynomial f = a_0 b_0 + ... + a_d b_d with every a_i >= 0 is a
nonnegative combination of the basis values b_i(z).  At a point z that
combination can only be zero if the plane vectors b_i(z) do not all lie in
an open half plane.  The library decides this with signs of tridiagonal
determinants, and this script walks through the steps for the binomial
basis b_i(z) = C(z+d-i, d).
"""

import math
from pathlib import Path

import numpy as np

from galeroot.basis import BasisContext, BasisKind
from galeroot.contour import marching_squares
from galeroot.grid import FieldKind, RegionGrid, RunManifest, emit_svg
from galeroot.rootlocus import (
    angle_sum,
    auto_window,
    certificate,
    certificate_residual,
    excluded,
    sigma_triple,
)

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

d = 6
ctx = BasisContext(BasisKind.BINOMIAL, d)

# A far-away point is excluded: every triple of indices carries both signs.
far = 40 + 40j
print("sign set of (0, 3, 6) at", far, "->", sigma_triple(ctx, 0, 3, 6, far))
print("excluded:", excluded(ctx, far))

# Near the origin some triple fails to certify, and a nonnegative
# combination vanishing there can be written down explicitly.
near = -0.5 + 1.0j
a = certificate(ctx, near)
print("certificate at", near, "->", np.round(a, 4))
print("relative residual:", certificate_residual(ctx, a, near))

# The boundary of the region of possible roots is the outermost oval,
# where the viewing-angle sum of the segments [-a_i, a_i] equals pi.
print("angle sum at", near, "->", round(angle_sum(ctx, 0, d, near).angle_sum / math.pi, 4), "* pi")

# Sample the exclusion test on a grid and trace its boundary.
window = auto_window(d)
grid = RegionGrid.sample(lambda z: excluded(ctx, z), window, 300, 300, FieldKind.EXCLUDED)
boundary = marching_squares(grid.values.astype(float), grid.xs, grid.ys, 0.5)
print(f"excluded share of the window: {grid.values.mean():.3f}; boundary pieces: {len(boundary)}")

svg = emit_svg(window, [("boundary", boundary)], manifest=RunManifest("demo", "binomial", d))
(out / "exclusion_region.svg").write_text(svg)
print("wrote", out / "exclusion_region.svg")
