"""Random nonnegative polynomials, the barycenter field and the clustering study.

Coefficients for polynomial number ``n`` of a run come from
``numpy.random.Generator(Philox(key=seed, counter=[0, 0, n, 0]))``: a
counter-based stream per polynomial, so batches can be split across workers
and still reproduce bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .basis import BasisContext, BasisKind, basis_values
from .galedual import ConstraintKind, LinearConstraint
from .grid import FieldKind, RegionGrid, Window
from .rootfind import PolynomialInBasis, find_roots, find_roots_batch, polish, to_power
from .rootlocus import angle_sum_array, auto_window

MAX_REJECTIONS = 10**6


class SamplingError(RuntimeError):
    """Raised when rejection sampling exceeds its budget."""


@dataclass
class SampleSpec:
    ctx: BasisContext
    N: float = 1.0
    count: int = 1
    seed: int = 0
    ends_nonzero: bool = False
    constraints: Tuple[LinearConstraint, ...] = ()

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not self.N > 0:
            raise ValueError("N must be positive")
        if isinstance(self.constraints, LinearConstraint):
            self.constraints = (self.constraints,)
        self.constraints = tuple(self.constraints)


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for polynomial ``index`` of a run."""
    return np.random.Generator(np.random.Philox(key=seed & (2**64 - 1), counter=[0, 0, index, 0]))


def _equation_solver(spec: SampleSpec):
    """Pivot indices and the solve for the equation constraints."""
    eqs = [c for c in spec.constraints if c.kind is ConstraintKind.EQ]
    if not eqs:
        return None
    L = np.array([[float(v) for v in c.lam] for c in eqs])
    pivots: List[int] = []
    for row in L:
        cands = [i for i in np.flatnonzero(row) if i not in pivots]
        if not cands:
            raise ValueError("equation constraints are linearly dependent")
        pivots.append(int(cands[-1]))
    A = L[:, pivots]
    if abs(np.linalg.det(A)) < 1e-12:
        raise ValueError("equation constraints cannot be solved for distinct coefficients")
    free = [i for i in range(L.shape[1]) if i not in pivots]
    return pivots, free, A, L


def _draw(spec: SampleSpec, rng: np.random.Generator, solver) -> Tuple[np.ndarray, int]:
    d = spec.ctx.d
    rejections = 0
    ineqs = [c for c in spec.constraints if c.kind is not ConstraintKind.EQ]
    while True:
        a = rng.uniform(0.0, spec.N, d + 1)
        ok = True
        if solver is not None:
            pivots, free, A, L = solver
            a[pivots] = 0.0
            a[pivots] = np.linalg.solve(A, -(L[:, free] @ a[free]))
            ok = bool(np.all(a[pivots] >= 0))
        if ok and spec.ends_nonzero:
            ok = a[0] > 0 and a[d] > 0
        if ok:
            ok = all(c.holds(a) for c in ineqs) and np.any(a > 0)
        if ok:
            return a, rejections
        rejections += 1
        if rejections > MAX_REJECTIONS:
            raise SamplingError(f"more than {MAX_REJECTIONS} rejections for one sample")


def sample_coefficients(spec: SampleSpec, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Coefficient vectors for indices ``start..stop-1``; shape ``(n, d+1)``."""
    stop = spec.count if stop is None else stop
    solver = _equation_solver(spec)
    rows = [_draw(spec, stream(spec.seed, n), solver)[0] for n in range(start, stop)]
    return np.array(rows).reshape(-1, spec.ctx.d + 1)


def sample(spec: SampleSpec) -> List[PolynomialInBasis]:
    return [PolynomialInBasis(spec.ctx, tuple(a)) for a in sample_coefficients(spec)]


@dataclass
class RootBatch:
    """Roots of a sampled batch: flat arrays with the polynomial index of each root."""

    poly_index: np.ndarray
    roots: np.ndarray
    residual: np.ndarray

    @property
    def is_real(self) -> np.ndarray:
        return self.roots.imag == 0


def batch_roots(ctx: BasisContext, coeffs: np.ndarray, do_polish: bool = True) -> RootBatch:
    """Roots of every coefficient row, polished in basis form."""
    from .basis import to_power_matrix
    from .rootfind import basis_residual

    M = np.array([[float(v) for v in row] for row in to_power_matrix(ctx)])
    C = coeffs @ M
    idx, roots, res = [], [], []
    regular = (C[:, 0] != 0) & (C[:, -1] != 0)
    R_reg = find_roots_batch(C[regular]) if regular.any() else np.zeros((0, ctx.d))
    reg_iter = iter(R_reg)
    for n, a in enumerate(coeffs):
        r = next(reg_iter) if regular[n] else find_roots(C[n])
        p = PolynomialInBasis(ctx, tuple(a))
        if do_polish:
            r = polish(p, r)
        idx.append(np.full(r.size, n))
        roots.append(r)
        res.append(basis_residual(p, r))
    cat = lambda xs, dt: np.concatenate(xs) if xs else np.zeros(0, dtype=dt)
    return RootBatch(cat(idx, int), cat(roots, complex), cat(res, float))


# ---------------------------------------------------------------------------
# barycenter


def barycenter(ctx: BasisContext, z):
    """``sum_i b_i(z)``."""
    vals = basis_values(ctx, z).sum(axis=0)
    return complex(vals) if np.ndim(vals) == 0 else vals


def binomial_choose(z, n: int):
    """``C(z, n) = z (z-1) .. (z-n+1) / n!`` for complex z."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for m in range(n):
        out = out * (z - m)
    return out / math.factorial(n)


def binomial_barycenter(d: int, z):
    """Closed form ``C(z+d+1, d+1) - C(z, d+1)`` of the binomial-basis barycenter."""
    z = np.asarray(z, dtype=complex)
    out = binomial_choose(z + d + 1, d + 1) - binomial_choose(z, d + 1)
    return complex(out) if out.ndim == 0 else out


def power_barycenter_zeros(d: int) -> np.ndarray:
    """Zeros of ``1 + z + .. + z^d``: the (d+1)-st roots of unity other than 1."""
    k = np.arange(1, d + 1)
    return np.exp(2j * np.pi * k / (d + 1))


# ---------------------------------------------------------------------------
# clustering


@dataclass
class ClusteringReport:
    grid: RegionGrid
    roots: RootBatch
    coefficients: np.ndarray


def default_window(ctx: BasisContext) -> Window:
    d = ctx.d
    if ctx.kind is BasisKind.BINOMIAL:
        return (-d - 1.0, float(d), -(d / 2 + 1), d / 2 + 1)
    return (-d - 1.0, float(d), -(d / 2 + 1), d / 2 + 1)


def clustering_report(spec: Optional[SampleSpec], ctx: Optional[BasisContext] = None,
                      window: Optional[Window] = None, resolution: Tuple[int, int] = (200, 200)
                      ) -> ClusteringReport:
    """``|beta|`` on a grid plus the roots of a sampled batch on the same window.

    ``spec=None`` gives the grid alone.
    """
    ctx = spec.ctx if spec is not None else ctx
    if ctx is None:
        raise ValueError("need a SampleSpec or a BasisContext")
    window = window or default_window(ctx)
    grid = RegionGrid.sample(lambda z: np.abs(barycenter(ctx, z)), window,
                             resolution[0], resolution[1], FieldKind.BARYCENTER_ABS)
    if spec is None:
        empty = RootBatch(np.zeros(0, dtype=int), np.zeros(0, dtype=complex), np.zeros(0))
        return ClusteringReport(grid, empty, np.zeros((0, ctx.d + 1)))
    coeffs = sample_coefficients(spec)
    return ClusteringReport(grid, batch_roots(ctx, coeffs), coeffs)


def uniform_in_outer_region(d: int, count: int, seed: int) -> np.ndarray:
    """Uniform points of ``cl D_{0,d;1}`` (binomial) by rejection from its bounding box."""
    x0, x1, y0, y1 = auto_window(d)
    rng = stream(seed, 2**32)
    out: List[np.ndarray] = []
    have = 0
    while have < count:
        z = rng.uniform(x0, x1, 4 * count) + 1j * rng.uniform(y0, y1, 4 * count)
        z = z[angle_sum_array(d, 0, d, z) >= math.pi]
        out.append(z)
        have += z.size
    return np.concatenate(out)[:count]


@dataclass
class ClusteringProxy:
    median_at_roots: float
    median_uniform: float
    n_roots: int

    @property
    def holds(self) -> bool:
        return self.median_at_roots < self.median_uniform


def clustering_proxy(d: int = 6, count: int = 500, seed: int = 0,
                     N: Optional[float] = None) -> ClusteringProxy:
    """Median ``|beta|`` at non-real roots of random binomial-basis polynomials
    versus at uniform points of the outermost oval's closure."""
    ctx = BasisContext(BasisKind.BINOMIAL, d)
    spec = SampleSpec(ctx, N=float(math.factorial(d)) if N is None else N, count=count,
                      seed=seed, ends_nonzero=True)
    roots = batch_roots(ctx, sample_coefficients(spec)).roots
    nonreal = roots[roots.imag != 0]
    at_roots = float(np.median(np.abs(barycenter(ctx, nonreal))))
    uniform = uniform_in_outer_region(d, max(count, 1000), seed)
    return ClusteringProxy(at_roots, float(np.median(np.abs(barycenter(ctx, uniform)))), nonreal.size)
