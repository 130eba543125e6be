"""
Linear constraints shrink the set of possible roots
===================================================

Ehrhart polynomials in the binomial basis have nonnegative coefficients and
also satisfy a_d <= a_0 + a_1.  Adding that inequality as an extra row of the
Gale dual gives a finer test.  Chromatic polynomials satisfy linear
equations instead, handled by recombining columns of the dual.
"""

from fractions import Fraction

import numpy as np

from galeroot.basis import BasisContext, BasisKind
from galeroot.determinant import chromatic_det
from galeroot.galedual import (
    alt_power_equation_dual,
    build_gale_dual,
    chromatic_equation_dual,
    ehrhart_constraint,
    extend_with_inequality,
)
from galeroot.randstudy import SampleSpec, batch_roots, sample_coefficients
from galeroot.rootlocus import auto_window, excluded, excluded_with_constraints

d = 10
ctx = BasisContext(BasisKind.BINOMIAL, d)
con = ehrhart_constraint(d)
ext = extend_with_inequality(build_gale_dual(ctx), con)
print("extended dual verified exactly:", ext.verify())

# Compare the plain and refined tests on a grid.
x0, x1, y0, y1 = auto_window(d)
z = np.linspace(x0, x1, 200)[None, :] + 1j * np.linspace(y0, y1, 200)[:, None]
plain = excluded(ctx, z)
refined = excluded_with_constraints(ext, z)
print(f"excluded: plain {plain.mean():.3f}, with the inequality {refined.mean():.3f}")
print("refinement is monotone:", bool(np.all(refined[plain])))

# Random polynomials obeying the inequality never put a root in the refined region.
coeffs = sample_coefficients(SampleSpec(ctx, count=500, seed=1, constraints=(con,)))
roots = batch_roots(ctx, coeffs).roots
nonreal = roots[roots.imag != 0]
print("roots flagged excluded:", int(excluded_with_constraints(ext, nonreal).sum()), "of", nonreal.size)

# Chromatic case, binomial basis: two of the ten 3-row determinants never vanish.
small = BasisContext(BasisKind.BINOMIAL, 4)
eq = chromatic_equation_dual(small, 0, Fraction(1, 2))
print("chromatic dual shape:", (eq.n_rows, eq.n_cols), "verified:", eq.verify())
w = np.linspace(-5, 4, 50)[None, :] + 1j * np.linspace(0.05, 4, 30)[:, None]
for K in [(0, 1, 2), (1, 2, 3), (0, 2, 4)]:
    vals = chromatic_det(small, 0, Fraction(1, 2), K, w)
    print(f"K={K}: sign range {np.sign(vals).min():+.0f}..{np.sign(vals).max():+.0f}")

# Chromatic case, alternating power basis with m a_d = a_{d-1}.
alt = BasisContext(BasisKind.ALT_POWER, 6)
aext = alt_power_equation_dual(alt, 1, 7)
grid = np.linspace(-3, 3, 40)[None, :] + 1j * np.linspace(-3, 3, 25)[:, None]
a = excluded(alt, grid, first=1)
b = excluded_with_constraints(aext, grid)
print(f"alternating power: plain {a.sum()}, with the equation {b.sum()} excluded grid points")
