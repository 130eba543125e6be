"""Sign-set tests for root exclusion regions.

A point z is *excluded* when no polynomial with nonnegative coefficients in
the chosen basis can vanish there.  For every admissible index set J the
signs of the maximal minors of the Gale dual obtained by deleting all but one
row of J must contain both +1 and -1; a zero sign never helps exclusion, so
boundary points are reported as not excluded.

Grid evaluation is vectorised over points and split into chunks so that the
tables of ``D_{j,k}`` values stay small.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .basis import BasisContext, BasisKind, basis_values, real_root_locus
from .determinant import (
    DTable,
    ExactPoint,
    build_band,
    det_extended_from_table,
    omega_values,
    split_point,
)
from .galedual import ExtendedDual, GaleDual, as_extended

TOL_ABS = 1e-12
TOL_REL = 1e-9
CHUNK = 1 << 15


class RealAxisError(ValueError):
    """Raised by sign-set routines that are only defined off the real axis."""


# ---------------------------------------------------------------------------
# sign sets


@dataclass(frozen=True)
class SignSet:
    """A subset of {-1, 0, +1}."""

    values: frozenset

    @classmethod
    def of(cls, signs: Iterable[int]) -> "SignSet":
        return cls(frozenset(int(s) for s in signs))

    @property
    def excludes(self) -> bool:
        """True iff both -1 and +1 are present."""
        return 1 in self.values and -1 in self.values

    def __contains__(self, s) -> bool:
        return s in self.values

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{s:+d}" if s else "0" for s in sorted(self.values)) + "}"


class _SignAccumulator:
    """Per-point flags for which signs have been seen."""

    def __init__(self, shape):
        self.pos = np.zeros(shape, dtype=bool)
        self.neg = np.zeros(shape, dtype=bool)
        self.zero = np.zeros(shape, dtype=bool)

    def add(self, s) -> None:
        s = np.asarray(s)
        self.pos |= s > 0
        self.neg |= s < 0
        self.zero |= s == 0

    @property
    def both(self):
        return self.pos & self.neg

    def to_set(self) -> SignSet:
        vals = [v for v, f in ((1, self.pos), (-1, self.neg), (0, self.zero)) if bool(np.all(f))]
        return SignSet.of(vals)


def sign_of(v, scale=None, tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL):
    """Tolerance-aware sign; exact (Fraction / object) input gets the exact sign."""
    arr = np.asarray(v)
    if arr.dtype == object:
        return np.vectorize(lambda t: (t > 0) - (t < 0), otypes=[np.int8])(arr)
    thresh = tol_abs if scale is None else tol_abs + tol_rel * np.asarray(scale)
    return np.where(np.abs(arr) <= thresh, 0, np.sign(arr)).astype(np.int8)


# ---------------------------------------------------------------------------
# helpers


def _points(z):
    """Flattened float x, y arrays plus the original shape."""
    z = np.asarray(z, dtype=complex)
    return z.real.ravel(), z.imag.ravel(), z.shape


def _is_real(x, y):
    return np.abs(y) <= 1e-14 * (1 + np.abs(x))


def _in_locus(ctx: BasisContext, x) -> np.ndarray:
    out = np.zeros(np.shape(x), dtype=bool)
    for lo, hi in real_root_locus(ctx):
        out |= (x >= lo) & (x <= hi)
    return out


def _threads() -> int:
    env = os.environ.get("GALEROOT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _chunked(fn, x, y, dtype=bool):
    """Apply ``fn(x_chunk, y_chunk)`` over chunks; order-independent results."""
    n = x.size
    out = np.empty(n, dtype=dtype)
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]

    def run(b):
        s, e = b
        out[s:e] = fn(x[s:e], y[s:e])

    workers = min(_threads(), len(bounds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(run, bounds))
    else:
        for b in bounds:
            run(b)
    return out


def _table(ctx: BasisContext, x, y, first: int = 0, exact: bool = False) -> DTable:
    P, Q, R = build_band(ctx, first).triple_values(x, y)
    return DTable(P, Q, R, exact)


def _triple_signs(table: DTable, i: int, j: int, k: int):
    """Signed values ``(-1)^i D_jk, (-1)^{j+1} D_ik, (-1)^k D_ij`` (band positions)."""
    return (
        (-1) ** i * table.sign(j, k),
        (-1) ** (j + 1) * table.sign(i, k),
        (-1) ** k * table.sign(i, j),
    )


# ---------------------------------------------------------------------------
# triples


def sigma_triple(ctx: BasisContext, i: int, j: int, k: int, z) -> SignSet:
    """Sign set of the triple (i, j, k) at a single non-real point."""
    if not 0 <= i < j < k <= ctx.d:
        raise IndexError(f"need 0 <= i < j < k <= d, got {(i, j, k)}")
    ctx.require_complex()
    x, y, exact = split_point(z)
    if (y == 0) if exact else bool(np.all(_is_real(x, y))):
        raise RealAxisError("sign sets need a non-real point; use real_root_locus on the axis")
    table = _table(ctx, x, y, 0, exact)
    acc = _SignAccumulator(np.shape(x))
    for s in _triple_signs(table, i, j, k):
        acc.add(s)
    return acc.to_set()


def in_S_ijk(ctx: BasisContext, i: int, j: int, k: int, z) -> bool:
    """True iff the triple's sign set does not contain both -1 and +1."""
    return not sigma_triple(ctx, i, j, k, z).excludes


def _excluded_block(ctx: BasisContext, x, y, first: int = 0):
    table = _table(ctx, x, y, first)
    last = table.last
    excl = np.ones(x.shape, dtype=bool)
    for i, j, k in combinations(range(last + 1), 3):
        acc = _SignAccumulator(x.shape)
        for s in _triple_signs(table, i, j, k):
            acc.add(s)
        excl &= acc.both
        if not excl.any():
            break
    return excl


def excluded(ctx: BasisContext, z, first: int = 0):
    """Vectorised exclusion test.

    ``first > 0`` restricts to polynomials with ``a_0 = .. = a_{first-1} = 0``.
    Real points are decided by the real-root locus; off the axis every triple
    must carry both signs.
    """
    ctx.require_complex()
    x, y, shape = _points(z)
    out = _chunked(lambda a, b: _excluded_block(ctx, a, b, first), x, y)
    real = _is_real(x, y)
    if real.any():
        out[real] = ~_real_locus_first(ctx, x[real], first)
    return out.reshape(shape) if shape else bool(out[0])


def _real_locus_first(ctx: BasisContext, x, first: int):
    if first == 0:
        return _in_locus(ctx, x)
    # b_i b_j <= 0 with both indices >= first
    vals = basis_values(ctx, x.astype(complex)).real[first:]
    pos = (vals > 0).any(axis=0)
    neg = (vals < 0).any(axis=0)
    zero = (vals == 0).any(axis=0)
    return (pos & neg) | zero


# ---------------------------------------------------------------------------
# constrained tests


def admissible_sets(ext: ExtendedDual, strict: bool = True) -> List[Tuple[int, ...]]:
    """Row sets J of size ``n_rows - n_cols + 1``.

    Strict mode keeps only the sets containing every slack row.
    """
    size = ext.n_rows - ext.n_cols + 1
    rows = range(ext.n_rows)
    new = set(ext.new_rows)
    out = []
    for J in combinations(rows, size):
        if strict and not new <= set(J):
            continue
        out.append(J)
    return out


def _dense_signs(M, J: Sequence[int]):
    """Signed maximal minors ``(-1)^{j_t+t+1} det M_{J - j_t}`` for float/object stacks."""
    n_rows = M.shape[-2]
    out = []
    for t, jt in enumerate(J, start=1):
        drop = set(J) - {jt}
        keep = [r for r in range(n_rows) if r not in drop]
        sub = M[..., keep, :]
        if sub.dtype == object:
            det = np.array([_fraction_det(s) for s in sub.reshape((-1,) + sub.shape[-2:])],
                           dtype=object).reshape(sub.shape[:-2])
            s = sign_of(det)
        else:
            det = np.linalg.det(sub) if sub.shape[-1] else np.ones(sub.shape[:-2])
            hadamard = np.prod(np.linalg.norm(sub, axis=-1), axis=-1)
            s = sign_of(det, hadamard)
        out.append((-1) ** (jt + t + 1) * s)
    return out


def _fraction_det(M) -> Fraction:
    M = [[Fraction(v) for v in row] for row in M]
    n = len(M)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            f = M[r][i] / M[i][i]
            if f:
                for c in range(i, n):
                    M[r][c] -= f * M[i][c]
    return det


def _fast_path(ext: ExtendedDual) -> bool:
    return ext.m == 1 and ext.column_transform is None and not ext.equations


def _single_ineq_signs(ext: ExtendedDual, table: DTable, omega, J):
    """Signs for J = {j, k, l, slack} from D values and the extended determinant."""
    j, k, l, _ = J
    last = table.last
    ext_det = det_extended_from_table(table, (j, k, l), omega)
    scale = None if table.exact else _ext_scale(table, (j, k, l), omega)
    return (
        (-1) ** j * table.sign(k, l),
        (-1) ** (k + 1) * table.sign(j, l),
        (-1) ** l * table.sign(j, k),
        (-1) ** last * sign_of(ext_det, scale),
    )


def _ext_scale(table: DTable, K, omega):
    # same expansion with every factor replaced by its magnitude
    return det_extended_from_table(_AbsTable(table), K, [None if w is None else abs(w) for w in omega])


class _AbsTable:
    """Table view returning error bounds of D values (for tolerance only)."""

    def __init__(self, table: DTable):
        self.P = [abs(p) for p in table.P]
        self.R = [abs(r) for r in table.R]
        self.n_cols = table.n_cols
        self.last = table.last
        self._t = table

    def value(self, j, k):
        if j >= k:
            return 0.0
        row = self._t.rows[j]
        return np.abs(row.bound[k]) * np.exp(row.log_scale[k])


def _constrained_block(ext: ExtendedDual, x, y, sets, exact: bool = False):
    if _fast_path(ext):
        table = _table(ext.ctx, x, y, ext.base.first, exact)
        lam = ext.inequalities[0].lam[ext.base.first:]
        omega = omega_values(table.P, table.Q, table.R, lam)
        slack = ext.n_rows - 1
        dense = {}

        def signer(J):
            if J[-1] == slack:
                return _single_ineq_signs(ext, table, omega, J)
            if "M" not in dense:
                dense["M"] = ext.evaluate(x, y)
            return _dense_signs(dense["M"], J)
    else:
        M = ext.evaluate(x, y)
        signer = lambda J: _dense_signs(M, J)
    excl = np.ones(np.shape(x), dtype=bool)
    for J in sets:
        acc = _SignAccumulator(np.shape(x))
        for s in signer(J):
            acc.add(s)
        # an all-zero set spans no hyperplane, so it carries no cocircuit
        excl &= acc.both | ~(acc.pos | acc.neg)
        if not excl.any():
            break
    return excl


def excluded_with_constraints(setup, z, strict: bool = True):
    """Exclusion under linear constraints on the coefficients.

    ``setup`` is a BasisContext (no constraints, same as :func:`excluded`) or
    an ExtendedDual.  With ``strict`` (default) only index sets containing
    every slack row are used; ``strict=False`` uses all of them.
    """
    if isinstance(setup, BasisContext):
        return excluded(setup, z)
    ext = as_extended(setup)
    if ext.m == 0 and not ext.equations and ext.column_transform is None:
        return excluded(ext.ctx, z, ext.base.first)
    sets = admissible_sets(ext, strict)
    x, y, shape = _points(z)
    out = _chunked(lambda a, b: _constrained_block(ext, a, b, sets), x, y)
    real = _is_real(x, y)
    if real.any():
        # constraints only shrink the set of possible roots
        out[real] = ~_real_locus_first(ext.ctx, x[real], ext.base.first)
    return out.reshape(shape) if shape else bool(out[0])


def sigma_quad(setup, J: Sequence[int], z) -> SignSet:
    """Sign set of one admissible row set J at a single non-real point.

    Row positions count base rows first (basis indices ``first..d``), then
    slack rows.
    """
    ext = as_extended(setup)
    if ext.m == 0 and not ext.equations:
        raise ValueError("sigma_quad needs at least one constraint")
    J = tuple(sorted(J))
    if len(J) != ext.n_rows - ext.n_cols + 1:
        raise ValueError(f"J must have {ext.n_rows - ext.n_cols + 1} rows")
    x, y, exact = split_point(z)
    x = np.atleast_1d(x)
    y = np.atleast_1d(y)
    if _fast_path(ext) and J[-1] == ext.n_rows - 1:
        table = _table(ext.ctx, x, y, ext.base.first, exact)
        lam = ext.inequalities[0].lam[ext.base.first:]
        omega = omega_values(table.P, table.Q, table.R, lam)
        signs = _single_ineq_signs(ext, table, omega, J)
    else:
        signs = _dense_signs(ext.evaluate(x, y), J)
    return SignSet.of(int(np.asarray(s).ravel()[0]) for s in signs)


# ---------------------------------------------------------------------------
# certificates


def certificate(ctx: BasisContext, z, rel_tol: float = 1e-9) -> Optional[np.ndarray]:
    """A nonnegative vector ``a != 0`` with ``sum a_i b_i(z) = 0``, or None.

    Looks for a vanishing basis value, then an antiparallel pair, then a
    triple whose vectors surround the origin.
    """
    w = basis_values(ctx, complex(z))
    mag = np.abs(w)
    n = ctx.d + 1
    scale = mag.max() if mag.size else 0.0
    a = np.zeros(n)
    zero = np.flatnonzero(mag <= 1e-15 * max(scale, 1e-300))
    if zero.size:
        a[zero[0]] = 1.0
        return a
    u = w / mag
    cross = np.imag(np.conj(u)[:, None] * u[None, :])
    dot = np.real(np.conj(u)[:, None] * u[None, :])
    anti = (np.abs(cross) <= rel_tol) & (dot < 0)
    pairs = np.argwhere(np.triu(anti, 1))
    if pairs.size:
        i, j = pairs[0]
        a[i], a[j] = mag[j], mag[i]
        return a / a.max()
    # triples: with c_ij = cross(w_i, w_j), c_jk w_i + c_ki w_j + c_ij w_k = 0
    for i, j, k in combinations(range(n), 3):
        cij, cjk, cki = cross[i, j], cross[j, k], cross[k, i]
        if (cij > rel_tol and cjk > rel_tol and cki > rel_tol) or (
            cij < -rel_tol and cjk < -rel_tol and cki < -rel_tol
        ):
            a[i], a[j], a[k] = abs(cjk) / mag[i], abs(cki) / mag[j], abs(cij) / mag[k]
            return a / a.max()
    return None


def certificate_residual(ctx: BasisContext, a, z) -> float:
    """``|sum a_i b_i(z)| / sum a_i |b_i(z)|``."""
    w = basis_values(ctx, complex(z))
    a = np.asarray(a, dtype=float)
    den = float(np.sum(a * np.abs(w)))
    return float(abs(np.sum(a * w)) / den) if den else math.inf


# ---------------------------------------------------------------------------
# binomial angle sums and ovals


@dataclass(frozen=True)
class OvalMembership:
    angle_sum: float
    oval_index: int


def shifted_points(d: int, j: int, k: int) -> Tuple[Fraction, List[Fraction]]:
    """Shift ``(k+j-d-1)/2`` and segment half-lengths ``a_i = i + (d-1-k+j)/2``."""
    shift = Fraction(k + j - d - 1, 2)
    half = Fraction(d - 1 - k + j, 2)
    return shift, [i + half for i in range(1, k - j + 1)]


def angle_sum_array(d: int, j: int, k: int, z):
    """Viewing-angle sum ``A(j, k; z)`` for an array of points (float)."""
    shift, half_lengths = shifted_points(d, j, k)
    z = np.asarray(z, dtype=complex) - float(shift)
    y = np.abs(z.imag)
    r2 = z.real ** 2 + y ** 2
    total = np.zeros(z.shape)
    comp = np.zeros(z.shape)
    for a in half_lengths:
        a = float(a)
        term = np.arctan2(2 * a * y, r2 - a * a)
        # Kahan summation
        t = term - comp
        s = total + t
        comp = (s - total) - t
        total = s
    return total


def _require_binomial(ctx: BasisContext) -> None:
    if ctx.kind is not BasisKind.BINOMIAL:
        raise ValueError("angle sums are defined for the binomial basis")


def angle_sum(ctx: BasisContext, j: int, k: int, z) -> OvalMembership:
    _require_binomial(ctx)
    if not 0 <= j < k <= ctx.d:
        raise IndexError(f"need 0 <= j < k <= d, got {(j, k)}")
    total = float(angle_sum_array(ctx.d, j, k, complex(z)))
    index = min(max(int(math.floor(total / math.pi)), 0), k - j - 1)
    return OvalMembership(total, index)


def in_outermost_closure(ctx: BasisContext, z, tol_angle: float = 1e-9):
    """True iff ``A(0, d; z) >= pi - tol_angle`` (vectorised)."""
    _require_binomial(ctx)
    vals = angle_sum_array(ctx.d, 0, ctx.d, z) >= math.pi - tol_angle
    return bool(vals) if np.ndim(vals) == 0 else vals


def limiting_circles(d: int, j: int, k: int) -> List[Tuple[complex, float]]:
    """Circles ``l = 1..k-j-1`` approximated by the ovals of ``D_{j,k}`` for large d."""
    n = k - j
    if n < 2:
        raise ValueError("need k - j >= 2")
    out = []
    for l in range(1, n):
        t = l * math.pi / n
        center = complex(-(d + 1 - k - j) / 2, -(d / 2) * math.cos(t) / math.sin(t))
        out.append((center, d / (2 * math.sin(t))))
    return out


def auto_window(d: int, j: int = 0, k: Optional[int] = None, pad: float = 1.15):
    """Bounding box of the limiting circles of (j, k), scaled about its centre."""
    k = d if k is None else k
    if k - j < 2:
        return (-d - 1.0, float(d), -1.0, 1.0)
    xs, ys = [], []
    for c, r in limiting_circles(d, j, k):
        xs += [c.real - r, c.real + r]
        ys += [c.imag - r, c.imag + r]
    cx, cy = (min(xs) + max(xs)) / 2, 0.0
    hx = (max(xs) - min(xs)) / 2 * pad
    hy = max(abs(v) for v in ys) * pad
    return (cx - hx, cx + hx, cy - hy, cy + hy)


# ---------------------------------------------------------------------------
# sectors, cones, orientation


def power_sector_excluded(d: int, z):
    """Power basis: no roots with ``|arg z| < pi/d``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("z = 0 has no argument")
    out = np.abs(np.angle(z)) < math.pi / d
    return bool(out) if out.ndim == 0 else out


def alt_power_sector(d: int, kappa: int, z):
    """Alternating power basis with ``kappa`` vanishing leading terms:
    no roots with ``|arg z| > (1 - 1/(d - kappa)) pi``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("z = 0 has no argument")
    if d - kappa < 1:
        raise ValueError("effective degree must be positive")
    out = np.abs(np.angle(z)) > (1 - 1 / (d - kappa)) * math.pi
    return bool(out) if out.ndim == 0 else out


def cone_order_check(ctx: BasisContext, z, tol: float = 1e-9) -> bool:
    """Outside the outermost oval the vectors ``w_0..w_d`` turn monotonically
    through less than pi, with ``w_0`` and ``w_d`` spanning the cone."""
    _require_binomial(ctx)
    if angle_sum(ctx, 0, ctx.d, z).angle_sum >= math.pi - tol:
        raise ValueError("cone_order_check needs a point outside the outermost oval")
    ang = np.unwrap(np.angle(basis_values(ctx, complex(z))))
    steps = np.diff(ang)
    monotone = bool(np.all(steps > 0) or np.all(steps < 0))
    span = abs(ang[-1] - ang[0])
    return monotone and span < math.pi


def orientation_sign(ctx: BasisContext, j: int, k: int, z) -> int:
    """Sign of the dot product of ``w_j(z)`` and ``w_k(z)``."""
    w = basis_values(ctx, complex(z))
    v = float(np.real(w[j] * np.conj(w[k])))
    return (v > 0) - (v < 0)


def oval_point(d: int, j: int, k: int, l: int, theta: float) -> complex:
    """Point of the oval ``A(j, k; z) = l pi`` on the ray at angle ``theta``
    (0 < theta < pi) from the shifted centre, by bisection."""
    if not 1 <= l <= k - j - 1:
        raise ValueError("oval index out of range")
    shift, _ = shifted_points(d, j, k)
    u = complex(math.cos(theta), math.sin(theta))
    target = l * math.pi
    lo, hi = 1e-9, 1.0
    while angle_sum_array(d, j, k, float(shift) + hi * u) > target:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if angle_sum_array(d, j, k, float(shift) + mid * u) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return float(shift) + 0.5 * (lo + hi) * u
