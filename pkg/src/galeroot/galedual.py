"""Banded Gale dual matrices and their extensions by linear constraints.

The Gale dual of ``W = (w_0 .. w_d)`` (columns ``w_i = (R_i, I_i)``) is the
``(d+1) x (d-1)`` matrix whose column ``c`` is ``(.., p_c, -q_c, r_c, ..)``
with ``p_c`` in row ``c``.  Vanishing leading coefficients
``a_0 = .. = a_{first-1} = 0`` are handled by dropping those rows and the
matching columns; rows are then indexed by basis index ``first..d``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .basis import (
    BasisContext,
    BasisKind,
    DegenerateDegreeError,
    basis_eval_exact,
    basis_realimag,
    basis_values,
    syzygy_triple,
    triple_values,
)
from .symbolic import ONE, ZERO, BivarPoly, poly_sum

Matrix = Tuple[Tuple[BivarPoly, ...], ...]


class ConstraintKind(enum.Enum):
    LE = "le"  # sum lam_i a_i <= 0, slack s >= 0
    LT = "lt"  # strict, s > 0
    EQ = "eq"  # sum lam_i a_i = 0

    @property
    def is_inequality(self) -> bool:
        return self is not ConstraintKind.EQ


@dataclass(frozen=True)
class LinearConstraint:
    lam: Tuple[Fraction, ...]
    kind: ConstraintKind = ConstraintKind.LE

    def __post_init__(self):
        lam = tuple(Fraction(v) for v in self.lam)
        if not any(lam):
            raise ValueError("constraint vector must not be all zero")
        object.__setattr__(self, "lam", lam)

    def holds(self, a: Sequence[float], tol: float = 0.0) -> bool:
        s = sum(float(l) * float(x) for l, x in zip(self.lam, a))
        if self.kind is ConstraintKind.LE:
            return s <= tol
        if self.kind is ConstraintKind.LT:
            return s < -tol if tol else s < 0
        return abs(s) <= tol


def ehrhart_constraint(d: int) -> LinearConstraint:
    """``a_d <= a_0 + a_1`` written as ``-a_0 - a_1 + a_d <= 0``."""
    if d < 2:
        raise DegenerateDegreeError("Ehrhart constraint needs d >= 2")
    lam = [Fraction(0)] * (d + 1)
    lam[0] -= 1
    lam[1] -= 1
    lam[d] += 1
    return LinearConstraint(tuple(lam), ConstraintKind.LE)


# ---------------------------------------------------------------------------
# the plain dual


@dataclass(frozen=True)
class GaleDual:
    ctx: BasisContext
    first: int = 0
    entries: Matrix = field(default=(), compare=False, repr=False)

    @property
    def n_rows(self) -> int:
        return self.ctx.d - self.first + 1

    @property
    def n_cols(self) -> int:
        return self.ctx.d - self.first - 1

    @property
    def row_indices(self) -> range:
        return range(self.first, self.ctx.d + 1)

    def triple(self, c: int):
        """Syzygy triple for column c (basis index ``first + c``)."""
        return syzygy_triple(self.ctx, self.first + c)

    def triple_values(self, x, y):
        P, Q, R = [], [], []
        for c in range(self.n_cols):
            p, q, r = triple_values(self.ctx, self.first + c, x, y)
            P.append(p)
            Q.append(q)
            R.append(r)
        return P, Q, R

    def evaluate(self, x, y) -> np.ndarray:
        """Numeric matrix, shape ``x.shape + (n_rows, n_cols)``."""
        x = np.asarray(x)
        y = np.asarray(y)
        shape = np.broadcast(x, y).shape
        dtype = object if (x.dtype == object or y.dtype == object) else float
        out = np.zeros(shape + (self.n_rows, self.n_cols), dtype=dtype)
        P, Q, R = self.triple_values(x, y)
        for c in range(self.n_cols):
            out[..., c, c] = P[c]
            out[..., c + 1, c] = -Q[c]
            out[..., c + 2, c] = R[c]
        return out


def build_gale_dual(ctx: BasisContext, first: int = 0) -> GaleDual:
    """Symbolic banded Gale dual of the basis (rows ``first..d``)."""
    ctx.require_complex()
    if not 0 <= first <= ctx.d - 2:
        raise DegenerateDegreeError(f"leading index {first} leaves fewer than 3 basis elements")
    n_rows = ctx.d - first + 1
    n_cols = n_rows - 2
    rows = [[ZERO] * n_cols for _ in range(n_rows)]
    for c in range(n_cols):
        p, q, r = syzygy_triple(ctx, first + c)
        rows[c][c] = p
        rows[c + 1][c] = -q
        rows[c + 2][c] = r
    return GaleDual(ctx, first, tuple(tuple(r) for r in rows))


def primal_rows(ctx: BasisContext, first: int = 0) -> Tuple[List[BivarPoly], List[BivarPoly]]:
    re, im = [], []
    for i in range(first, ctx.d + 1):
        R, I = basis_realimag(ctx, i)
        re.append(R)
        im.append(I)
    return re, im


def _matmul_row(row: Sequence, M: Matrix) -> List[BivarPoly]:
    ncols = len(M[0]) if M else 0
    out = []
    for c in range(ncols):
        out.append(poly_sum(row[i] * M[i][c] for i in range(len(row)) if not M[i][c].is_zero()))
    return out


def verify_duality(ctx: BasisContext, gd: Optional[GaleDual] = None) -> bool:
    """True iff ``W * Wbar`` is the zero polynomial matrix."""
    gd = gd or build_gale_dual(ctx)
    re, im = primal_rows(ctx, gd.first)
    return all(p.is_zero() for p in _matmul_row(re, gd.entries) + _matmul_row(im, gd.entries))


def real_gale_dual(ctx: BasisContext, x):
    """Kernel basis of the single row ``(b_0(x) .. b_d(x))``; shape ``(d+1) x d``.

    Exact (list of Fraction rows) for rational x, numpy float otherwise.
    """
    exact = isinstance(x, (int, Fraction))
    if exact:
        b = [basis_eval_exact(ctx, i, x, 0)[0] for i in range(ctx.d + 1)]
        zero = Fraction(0)
    else:
        b = list(basis_values(ctx, complex(float(x), 0.0)).real)
        zero = 0.0
    M = [[zero] * ctx.d for _ in range(ctx.d + 1)]
    for j in range(ctx.d):
        M[j][j] = -b[j + 1]
        M[j + 1][j] = b[j]
    return M if exact else np.array(M, dtype=float)


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True)
class ExtendedDual:
    """Gale dual of the primal extended by constraint rows.

    Row layout: the base rows (basis indices ``first..d``) followed by one
    slack row per inequality.  ``column_transform`` (``n_cols x n_cols'``)
    recombines the base columns to honour equations.
    """

    base: GaleDual
    inequalities: Tuple[LinearConstraint, ...] = ()
    extra_rows: Tuple[Tuple[BivarPoly, ...], ...] = ()
    equations: Tuple[LinearConstraint, ...] = ()
    column_transform: Optional[Matrix] = None
    label: str = ""

    @property
    def ctx(self) -> BasisContext:
        return self.base.ctx

    @property
    def n_base_rows(self) -> int:
        return self.base.n_rows

    @property
    def n_rows(self) -> int:
        return self.base.n_rows + len(self.extra_rows)

    @property
    def n_cols(self) -> int:
        if self.column_transform is None:
            return self.base.n_cols
        return len(self.column_transform[0]) if self.column_transform else 0

    @property
    def m(self) -> int:
        return len(self.extra_rows)

    @property
    def new_rows(self) -> range:
        return range(self.base.n_rows, self.n_rows)

    def untransformed(self) -> Matrix:
        return tuple(self.base.entries) + tuple(self.extra_rows)

    def matrix(self) -> Matrix:
        rows = self.untransformed()
        if self.column_transform is None:
            return rows
        return tuple(tuple(_matmul_row(r, self.column_transform)) for r in rows)

    def primal(self) -> List[List[BivarPoly]]:
        """Symbolic extended primal: R, I and one row per constraint."""
        re, im = primal_rows(self.ctx, self.base.first)
        m = self.m
        rows = [re + [ZERO] * m, im + [ZERO] * m]
        for t, c in enumerate(self.inequalities):
            lam = [BivarPoly.const(v) for v in c.lam[self.base.first:]]
            slack = [ONE if s == t else ZERO for s in range(m)]
            rows.append(lam + slack)
        for c in self.equations:
            rows.append([BivarPoly.const(v) for v in c.lam[self.base.first:]] + [ZERO] * m)
        return rows

    def verify(self) -> bool:
        """Exact check that the extended primal annihilates the matrix."""
        M = self.matrix()
        if not M or not M[0]:
            return True
        return all(p.is_zero() for row in self.primal() for p in _matmul_row(row, M))

    def evaluate(self, x, y) -> np.ndarray:
        """Numeric matrix, shape ``x.shape + (n_rows, n_cols)``."""
        x = np.asarray(x)
        y = np.asarray(y)
        base = self.base.evaluate(x, y)
        shape = base.shape[:-2]
        if self.extra_rows:
            extra = np.zeros(shape + (self.m, self.base.n_cols), dtype=base.dtype)
            for t, row in enumerate(self.extra_rows):
                for c, poly in enumerate(row):
                    if not poly.is_zero():
                        extra[..., t, c] = poly.eval_array(x, y)
            full = np.concatenate([base, extra], axis=-2)
        else:
            full = base
        if self.column_transform is None:
            return full
        T = np.zeros(shape + (self.base.n_cols, self.n_cols), dtype=base.dtype)
        for a, row in enumerate(self.column_transform):
            for b, poly in enumerate(row):
                if not poly.is_zero():
                    T[..., a, b] = poly.eval_array(x, y)
        if base.dtype == object:
            out = np.empty(shape + (self.n_rows, self.n_cols), dtype=object)
            for idx in np.ndindex(*shape) if shape else [()]:
                out[idx] = np.dot(full[idx], T[idx])
            return out
        return full @ T


def as_extended(gd) -> ExtendedDual:
    if isinstance(gd, ExtendedDual):
        return gd
    if isinstance(gd, GaleDual):
        return ExtendedDual(gd)
    if isinstance(gd, BasisContext):
        return ExtendedDual(build_gale_dual(gd))
    raise TypeError(f"cannot extend {type(gd).__name__}")


def omega_row(gd: GaleDual, c: LinearConstraint) -> Tuple[BivarPoly, ...]:
    """``omega_i = -lam_i p_i + lam_{i+1} q_i - lam_{i+2} r_i`` per base column."""
    if len(c.lam) != gd.ctx.d + 1:
        raise ValueError(f"constraint has {len(c.lam)} entries, expected {gd.ctx.d + 1}")
    lam = c.lam[gd.first:]
    row = []
    for i in range(gd.n_cols):
        p, q, r = gd.triple(i)
        row.append(p * (-lam[i]) + q * lam[i + 1] - r * lam[i + 2])
    return tuple(row)


def extend_with_inequality(gd, c: LinearConstraint) -> ExtendedDual:
    """Append the slack row of an inequality constraint."""
    if not c.kind.is_inequality:
        raise ValueError("extend_with_inequality needs an inequality constraint")
    ext = as_extended(gd)
    if ext.column_transform is not None:
        raise ValueError("add inequalities before equations")
    return ExtendedDual(
        ext.base,
        ext.inequalities + (c,),
        ext.extra_rows + (omega_row(ext.base, c),),
        ext.equations,
        None,
        ext.label,
    )


def extend_with_equation(gd, c: LinearConstraint) -> ExtendedDual:
    """Generic exact column recombination for one equation.

    With ``s_c = lam . v_c`` for the current columns ``v_c``, the columns
    ``s_piv v_c - s_c v_piv`` (``c != piv``) span the constrained kernel
    wherever ``s_piv != 0``.  Slower and less structured than the explicit
    chromatic transforms.
    """
    if c.kind is not ConstraintKind.EQ:
        raise ValueError("extend_with_equation needs an equation")
    ext = as_extended(gd)
    lam = [BivarPoly.const(v) for v in c.lam[ext.base.first:]] + [ZERO] * ext.m
    M = ext.matrix()
    s = _matmul_row(lam, M)
    nz = [i for i, v in enumerate(s) if not v.is_zero()]
    n = len(s)
    prev = ext.column_transform or tuple(
        tuple(ONE if a == b else ZERO for b in range(n)) for a in range(n)
    )
    if not nz:
        # every column already satisfies the equation
        return ExtendedDual(ext.base, ext.inequalities, ext.extra_rows,
                            ext.equations + (c,), prev, ext.label)
    piv = nz[-1]
    step = [[ZERO] * (n - 1) for _ in range(n)]
    col = 0
    for j in range(n):
        if j == piv:
            continue
        step[j][col] = s[piv]
        step[piv][col] = -s[j]
        col += 1
    T = tuple(tuple(_matmul_row(row, tuple(tuple(r) for r in step))) for row in prev)
    return ExtendedDual(ext.base, ext.inequalities, ext.extra_rows,
                        ext.equations + (c,), T, ext.label)


def alt_power_equation_dual(ctx: BasisContext, kappa: int, m: int) -> ExtendedDual:
    """Alternating power basis with ``a_0..a_{kappa-1} = 0`` and ``m a_d = a_{d-1}``.

    The last two columns of the dual are replaced by ``(0,..,0,g,h,m,1)``
    with ``g = (m-2x)(x^2+y^2)`` and ``h = (m-2x) 2x + x^2 + y^2``.
    """
    if ctx.kind is not BasisKind.ALT_POWER:
        raise ValueError("alt_power_equation_dual needs the alternating power basis")
    dp = ctx.d - kappa
    if kappa < 0 or dp < 3:
        raise DegenerateDegreeError(f"kappa={kappa} leaves effective degree {dp} < 3")
    gd = build_gale_dual(ctx, first=kappa)
    n = gd.n_cols
    from .symbolic import X

    T = [[ONE if a == b else ZERO for b in range(n - 1)] for a in range(n)]
    T[n - 2][n - 2] = m - 2 * X
    T[n - 1][n - 2] = ONE
    lam = [Fraction(0)] * (ctx.d + 1)
    lam[ctx.d - 1] = Fraction(-1)
    lam[ctx.d] = Fraction(m)
    eqs = tuple(_vanishing(ctx.d, i) for i in range(kappa)) + (
        LinearConstraint(tuple(lam), ConstraintKind.EQ),
    )
    return ExtendedDual(gd, (), (), eqs, tuple(tuple(r) for r in T),
                        f"chromatic-altpower:{kappa},{m}")


def chromatic_equation_dual(ctx: BasisContext, chi: int, eps) -> ExtendedDual:
    """Binomial basis with ``a_0..a_{chi-1} = 0`` and ``sum a_i - a_d / eps = 0``.

    Columns ``(v_1 - v_0, .., v_{d'-3} - v_0, lam v_{d'-2} - mu v_0)`` with
    ``lam = eps d (d-1)`` and ``mu = lam - r_{d'-2}`` (translated indices).
    """
    if ctx.kind is not BasisKind.BINOMIAL:
        raise ValueError("chromatic_equation_dual needs the binomial basis")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    dp = ctx.d - chi
    if chi < 0 or dp < 3:
        raise DegenerateDegreeError(f"chi={chi} leaves effective degree {dp} < 3")
    gd = build_gale_dual(ctx, first=chi)
    n = gd.n_cols  # d' - 1
    lam = eps * ctx.d * (ctx.d - 1)
    r_last = gd.triple(n - 1)[2]
    mu = BivarPoly.const(lam) - r_last
    T = [[ZERO] * (n - 1) for _ in range(n)]
    for c in range(1, n - 1):
        T[c][c - 1] = ONE
        T[0][c - 1] = -ONE
    T[n - 1][n - 2] = BivarPoly.const(lam)
    T[0][n - 2] = -mu
    row = [Fraction(0)] * chi + [Fraction(1)] * (dp + 1)
    row[ctx.d] = 1 - 1 / eps
    eqs = tuple(_vanishing(ctx.d, i) for i in range(chi)) + (
        LinearConstraint(tuple(row), ConstraintKind.EQ),
    )
    return ExtendedDual(gd, (), (), eqs, tuple(tuple(r) for r in T),
                        f"chromatic-binomial:{chi},{eps}")


def _vanishing(d: int, i: int) -> LinearConstraint:
    lam = [Fraction(0)] * (d + 1)
    lam[i] = Fraction(1)
    return LinearConstraint(tuple(lam), ConstraintKind.EQ)
