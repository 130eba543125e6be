"""
Random polynomials and the barycenter
=====================================

Draw coefficient vectors uniformly from a cube, find all roots, and compare
their locations with the barycenter beta(z) = b_0(z) + ... + b_d(z).  Roots
tend to gather where |beta| is small.
"""

import math
from pathlib import Path

import numpy as np

from galeroot.basis import BasisContext, BasisKind
from galeroot.contour import marching_squares
from galeroot.grid import RunManifest, emit_svg
from galeroot.randstudy import (
    SampleSpec,
    barycenter,
    binomial_barycenter,
    clustering_proxy,
    clustering_report,
)
from galeroot.rootlocus import angle_sum_array

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

d = 6
ctx = BasisContext(BasisKind.BINOMIAL, d)
spec = SampleSpec(ctx, N=math.factorial(d), count=1000, seed=0, ends_nonzero=True)
report = clustering_report(spec, resolution=(300, 200))
roots = report.roots.roots
print(f"{roots.size} roots, max relative residual {report.roots.residual.max():.2e}")

nonreal = roots[roots.imag != 0]
inside = angle_sum_array(d, 0, d, nonreal) >= math.pi - 1e-6
print("non-real roots inside the outermost oval:", f"{inside.mean():.0%}")

# The barycenter has a closed form in the binomial basis.
z = 1.3 - 2.2j
print("beta(z) directly:", barycenter(ctx, z), " closed form:", binomial_barycenter(d, z))

# Median |beta| at the roots versus at uniform points of the same region.
proxy = clustering_proxy(d, 500, seed=0)
print(f"median |beta|: at roots {proxy.median_at_roots:.3g}, uniform {proxy.median_uniform:.3g}")

grid = report.grid
levels = np.geomspace(grid.values.max() * 1e-6, grid.values.max() / 10, 8)
layers = [(f"beta_{i}", marching_squares(grid.values, grid.xs, grid.ys, c)) for i, c in enumerate(levels)]
svg = emit_svg(grid.window, layers, points=roots, manifest=RunManifest("demo", "binomial", d, seed=0))
(out / "barycenter_roots.svg").write_text(svg)
print("wrote", out / "barycenter_roots.svg")
