"""Tridiagonal determinants ``D_{j,k}`` of the banded Gale dual and their minors.

All numeric routines work on a *band*: the value arrays ``P, Q, R`` of the
syzygy triples for columns ``0..n_cols-1``.  The arrays may hold floats (grid
scans) or Fractions in object arrays (exact checks); only ``+``, ``-`` and
``*`` are used, so one code path serves both.

Normalisation follows the recursion ``D_{j,j+1} = 1``, ``D_{j,j+2} = -q_j``.
For the binomial basis this is ``-2 (z zbar - a_1 a_2)`` in centred
coordinates when ``k - j = 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .basis import BasisContext, BasisKind, DegenerateDegreeError
from .galedual import GaleDual, LinearConstraint, build_gale_dual
from .symbolic import ONE, BivarPoly

OVERFLOW = 1e200


@dataclass(frozen=True)
class ExactPoint:
    """A point ``x + iy`` with rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))


def split_point(z):
    """Return ``(x, y, exact)`` arrays for a complex / array / ExactPoint input."""
    if isinstance(z, ExactPoint):
        return np.array(z.x, dtype=object), np.array(z.y, dtype=object), True
    if isinstance(z, tuple) and len(z) == 2:
        return np.array(Fraction(z[0]), dtype=object), np.array(Fraction(z[1]), dtype=object), True
    z = np.asarray(z, dtype=complex)
    return z.real.copy(), z.imag.copy(), False


def _scalar(v):
    if isinstance(v, np.ndarray) and v.shape == ():
        return v[()]
    return v


def band_values(ctx: BasisContext, x, y, first: int = 0):
    """Triple values for the band starting at basis index ``first``."""
    return build_band(ctx, first).triple_values(x, y)


def build_band(ctx: BasisContext, first: int = 0) -> GaleDual:
    # numeric-only band: skips the symbolic entries
    if ctx.d - first < 2:
        raise DegenerateDegreeError(f"degree {ctx.d - first} < 2")
    return GaleDual(ctx, first)


# ---------------------------------------------------------------------------
# recursion


@dataclass
class DRow:
    """``D_{j,k}`` for fixed j and ``k = j .. kmax``.

    ``value[k]`` is a mantissa; the true value is ``value[k] * exp(log_scale[k])``.
    ``bound[k]`` runs the same recursion on absolute values and bounds the
    size of the intermediate terms (used for sign tolerance).
    """

    j: int
    value: Dict[int, object]
    bound: Dict[int, object]
    log_scale: Dict[int, object]

    def true_value(self, k: int):
        if k not in self.log_scale or self.log_scale[k] is None:
            return self.value[k]
        return self.value[k] * np.exp(self.log_scale[k])


def d_row(P, Q, R, j: int, kmax: int, exact: bool = False) -> DRow:
    """Run the three-term recursion from ``D_{j,j} = 0``, ``D_{j,j+1} = 1``."""
    one = P[0] * 0 + 1 if P else 1
    zero = one * 0
    value = {j: zero, j + 1: one}
    bound = {j: zero, j + 1: one}
    lg = None if exact else np.zeros(np.shape(one))
    log_scale = {j: lg, j + 1: lg}
    d_pp, d_p = zero, one
    s_pp, s_p = zero, one
    for k in range(j + 2, kmax + 1):
        t = k - 2
        q = Q[t]
        if t - 1 >= j:
            pr = P[t] * R[t - 1]
            d_new = -q * d_p - pr * d_pp
        else:
            pr = None
            d_new = -q * d_p
        if not exact:
            s_new = abs(q) * s_p + (abs(pr) * s_pp if pr is not None else 0)
            big = np.abs(d_new) > OVERFLOW
            if np.any(big):
                f = np.where(big, np.abs(d_new), 1.0)
                d_new, d_p = d_new / f, d_p / f
                s_new, s_p = s_new / f, s_p / f
                lg = lg + np.log(f)
            s_pp, s_p = s_p, s_new
            bound[k] = s_new
        d_pp, d_p = d_p, d_new
        value[k] = d_new
        log_scale[k] = lg
    return DRow(j, value, bound, log_scale)


class DTable:
    """All ``D_{j,k}`` (``0 <= j < k <= n_rows-1``) of one band at a set of points."""

    def __init__(self, P, Q, R, exact: bool = False):
        self.P, self.Q, self.R = P, Q, R
        self.exact = exact
        self.n_cols = len(P)
        self.last = self.n_cols + 1  # largest row index
        self.rows: List[DRow] = [d_row(P, Q, R, j, self.last, exact) for j in range(self.last)]

    def value(self, j: int, k: int):
        if j >= k:
            return self.P[0] * 0 if self.P else 0
        return self.rows[j].true_value(k)

    def mantissa(self, j: int, k: int):
        return self.rows[j].value[k]

    def sign(self, j: int, k: int, tol_abs: float = 1e-12, tol_rel: float = 1e-9):
        row = self.rows[j]
        v = row.value[k]
        if self.exact:
            return np.vectorize(lambda t: (t > 0) - (t < 0), otypes=[np.int8])(np.asarray(v, dtype=object))
        lg = row.log_scale[k]
        thresh = tol_abs * np.exp(-lg) + tol_rel * row.bound[k]
        return np.where(np.abs(v) <= thresh, 0, np.sign(v)).astype(np.int8)


def _band_for(ctx: BasisContext, z, first: int = 0):
    x, y, exact = split_point(z)
    band = build_band(ctx, first)
    P, Q, R = band.triple_values(x, y)
    return P, Q, R, exact


# ---------------------------------------------------------------------------
# public operations


def d_poly(ctx: BasisContext, j: int, k: int) -> BivarPoly:
    """Symbolic ``D_{j,k}`` via the recursion over BivarPoly."""
    _check_pair(ctx, j, k)
    gd = build_gale_dual(ctx) if ctx.d >= 2 else None
    if k == j + 1:
        return ONE
    d_pp, d_p = BivarPoly(), ONE
    for t in range(j, k - 1):
        p, q, _ = gd.triple(t)
        d_new = -q * d_p
        if t - 1 >= j:
            d_new = d_new - p * gd.triple(t - 1)[2] * d_pp
        d_pp, d_p = d_p, d_new
    return d_p


def d_polys(ctx: BasisContext, j: int) -> Dict[int, BivarPoly]:
    """Symbolic ``D_{j,k}`` for all ``k > j`` from one recursion."""
    gd = build_gale_dual(ctx)
    out = {j + 1: ONE}
    d_pp, d_p = BivarPoly(), ONE
    for t in range(j, ctx.d - 1):
        p, q, _ = gd.triple(t)
        d_new = -q * d_p
        if t - 1 >= j:
            d_new = d_new - p * gd.triple(t - 1)[2] * d_pp
        d_pp, d_p = d_p, d_new
        out[t + 2] = d_new
    return out


def _check_pair(ctx: BasisContext, j: int, k: int) -> None:
    if not 0 <= j < k <= ctx.d:
        raise IndexError(f"need 0 <= j < k <= d, got j={j}, k={k}, d={ctx.d}")
    if ctx.d < 2 and k > j + 1:
        raise DegenerateDegreeError("degree < 2")


def d_eval(ctx: BasisContext, j: int, k: int, z):
    """``D_{j,k}`` at complex point(s) (float) or an ExactPoint (Fraction)."""
    _check_pair(ctx, j, k)
    if k == j + 1:
        x, _, exact = split_point(z)
        return Fraction(1) if exact else _scalar(np.ones_like(x))
    P, Q, R, exact = _band_for(ctx, z)
    row = d_row(P, Q, R, j, k, exact)
    return _scalar(row.true_value(k))


def d_closed_eval(ctx: BasisContext, j: int, k: int, z):
    """``D_{j,k}`` from ``(-1)^{k-j-1} (f(z) - f(zbar)) / (z - zbar)``.

    Refuses points with ``|y| < 1e-8 (1 + |x|)``; use :func:`d_eval` there.
    """
    _check_pair(ctx, j, k)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.imag) < 1e-8 * (1 + np.abs(z.real))):
        raise ValueError("d_closed_eval is undefined on the real axis; use d_eval")
    zb = np.conj(z)
    n = k - j - 1
    kind, d = ctx.kind, ctx.d
    f = np.ones_like(z)
    if kind in (BasisKind.POWER, BasisKind.ALT_POWER):
        f = z ** (k - j)
    elif kind is BasisKind.FALLING:
        for c in range(j, k):
            f = f * (z - c)
    elif kind in (BasisKind.RISING, BasisKind.ALT_RISING):
        for c in range(j, k):
            f = f * (z + c)
    else:
        for c in range(j, k):
            f = f * (z - c) * (zb + d - c)
        f = f / d
    # f has real coefficients in (z, zbar), so f(zbar) = conj(f(z))
    val = (-1) ** n * f.imag / z.imag
    if kind.alternating:
        val = (-1) ** n * val
    return _scalar(val)


def _prod(seq, one):
    out = one
    for v in seq:
        out = out * v
    return out


def det_deleted(ctx: BasisContext, j: int, k: int, z):
    """``det Wbar_(j,k) = p_0..p_{j-1} D_{j,k} r_{k-1}..r_{d-2}``."""
    _check_pair(ctx, j, k)
    ctx.require_complex()
    P, Q, R, exact = _band_for(ctx, z)
    table = DTable(P, Q, R, exact)
    one = P[0] * 0 + 1
    val = _prod(P[:j], one) * table.value(j, k) * _prod(R[k - 1:], one)
    return _scalar(val)


def minor_from_table(table: DTable, K: Sequence[int], c: int):
    """Minor of the band matrix with rows K = {j,k,l} and column c deleted."""
    j, k, l = sorted(K)
    P, R = table.P, table.R
    last_col = table.n_cols - 1
    one = P[0] * 0 + 1
    if not (0 <= j < k < l <= table.last) or not 0 <= c <= last_col:
        raise IndexError(f"bad minor indices K={K}, c={c}")
    lead = _prod(P[:j], one)
    tail = _prod(R[l - 1:last_col + 1], one)
    if c <= k - 1:
        return lead * table.value(j, c + 1) * _prod(P[c + 1:k], one) * table.value(k, l) * tail
    return lead * table.value(j, k) * _prod(R[k - 1:c], one) * table.value(c + 1, l) * tail


def minor_eval(ctx: BasisContext, K: Sequence[int], c: int, z):
    """``[Wbar]_{K;c}`` by the block-product formula."""
    P, Q, R, exact = _band_for(ctx, z)
    return _scalar(minor_from_table(DTable(P, Q, R, exact), K, c))


def omega_values(P, Q, R, lam: Sequence[Fraction]):
    out = []
    for i in range(len(P)):
        terms = []
        if lam[i]:
            terms.append(P[i] * (-_num(lam[i], P[i])))
        if lam[i + 1]:
            terms.append(Q[i] * _num(lam[i + 1], Q[i]))
        if lam[i + 2]:
            terms.append(R[i] * (-_num(lam[i + 2], R[i])))
        out.append(sum(terms[1:], terms[0]) if terms else None)
    return out


def _num(c: Fraction, like):
    # keep exact arithmetic exact and float arithmetic in floats
    if isinstance(like, np.ndarray) and like.dtype == object:
        return c
    if isinstance(like, Fraction):
        return c
    return float(c)


def det_extended_from_table(table: DTable, K: Sequence[int], omega) -> object:
    """``det Wtilde_K = (-1)^d sum_c (-1)^c omega_c [Wbar]_{K;c}`` (one slack row)."""
    d = table.last
    total = None
    for c, w in enumerate(omega):
        if w is None:
            continue
        term = w * minor_from_table(table, K, c)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return table.P[0] * 0
    return total if d % 2 == 0 else -total


def det_extended(ctx: BasisContext, K: Sequence[int], lam: Sequence, z):
    lam = [Fraction(v) for v in lam]
    P, Q, R, exact = _band_for(ctx, z)
    table = DTable(P, Q, R, exact)
    return _scalar(det_extended_from_table(table, K, omega_values(P, Q, R, lam)))


def leading_asymptote(ctx: BasisContext, j: int, k: int) -> int:
    """Coefficient of ``(x^2+y^2)^{k-j-1}`` in the top-degree part of ``D_{j,k}``."""
    if ctx.kind is not BasisKind.BINOMIAL:
        raise ValueError("leading_asymptote is defined for the binomial basis")
    _check_pair(ctx, j, k)
    n = k - j - 1
    return (-1) ** n * (k - j)


def chromatic_det(ctx: BasisContext, chi: int, eps, K: Sequence[int], z):
    """``[Wtilde]_K`` for the chromatic binomial equation dual.

    ``lam sum_{c<=d'-2} (-1)^c [Wbar]_{K;c} - (-1)^{d'-2} r_{d'-2} [Wbar]_{K;d'-2}``
    on the band of basis indices ``chi..d`` with ``lam = eps d (d-1)``.
    """
    if ctx.kind is not BasisKind.BINOMIAL:
        raise ValueError("chromatic_det needs the binomial basis")
    eps = Fraction(eps)
    dp = ctx.d - chi
    P, Q, R, exact = _band_for(ctx, z, first=chi)
    table = DTable(P, Q, R, exact)
    lam = eps * ctx.d * (ctx.d - 1)
    lam = lam if exact else float(lam)
    last = dp - 2
    acc = None
    for c in range(last + 1):
        term = minor_from_table(table, K, c)
        if c % 2:
            term = -term
        acc = term if acc is None else acc + term
    corr = R[last] * minor_from_table(table, K, last)
    if last % 2:
        corr = -corr
    return _scalar(lam * acc - corr)


def all_pairs(n_last: int):
    return [(j, k) for j in range(n_last) for k in range(j + 1, n_last + 1)]


def triples(n_last: int):
    return list(combinations(range(n_last + 1), 3))
