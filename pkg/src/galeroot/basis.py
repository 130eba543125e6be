"""The polynomial bases, their syzygy triples, and real-root loci.

Every supported basis element factors over the rationals as
``b_i(z) = s_i * prod_m (z - c_m)``, which gives exact real/imaginary parts,
exact conversion to the power basis and cheap complex evaluation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .symbolic import ONE, X, Y, ZERO, BivarPoly, ComplexPoly, linear_factor


class DegenerateDegreeError(ValueError):
    """Raised when complex-root machinery is asked for a degree below 2."""


class BasisKind(enum.Enum):
    POWER = "power"
    FALLING = "falling"
    RISING = "rising"
    BINOMIAL = "binomial"
    ALT_POWER = "alt-power"
    ALT_RISING = "alt-rising"

    @classmethod
    def parse(cls, name: str) -> "BasisKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "falling-factorial": "falling",
            "rising-factorial": "rising",
            "binomial-coefficient": "binomial",
            "alternating-power": "alt-power",
            "alternating-rising": "alt-rising",
            "alternating-rising-factorial": "alt-rising",
        }
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown basis {name!r}")

    @property
    def alternating(self) -> bool:
        return self in (BasisKind.ALT_POWER, BasisKind.ALT_RISING)


ALL_KINDS = tuple(BasisKind)


@dataclass(frozen=True)
class BasisContext:
    kind: BasisKind
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree must be nonnegative")

    def require_complex(self) -> None:
        if self.d < 2:
            raise DegenerateDegreeError(
                f"degree {self.d} < 2: the Gale dual has d-1 = {self.d - 1} columns"
            )

    def check_index(self, i: int) -> None:
        if not 0 <= i <= self.d:
            raise IndexError(f"basis index {i} outside 0..{self.d}")


# ---------------------------------------------------------------------------
# factored form


def basis_factors(ctx: BasisContext, i: int) -> Tuple[Fraction, List[Fraction]]:
    """Scale ``s`` and roots ``c`` with ``b_i(z) = s * prod (z - c)``."""
    ctx.check_index(i)
    kind, d = ctx.kind, ctx.d
    if kind in (BasisKind.POWER, BasisKind.ALT_POWER):
        roots = [Fraction(0)] * i
    elif kind is BasisKind.FALLING:
        roots = [Fraction(m) for m in range(i)]
    elif kind in (BasisKind.RISING, BasisKind.ALT_RISING):
        roots = [Fraction(-m) for m in range(i)]
    else:  # binomial: C(z+d-i, d) = prod_{m<d} (z + d - i - m) / d!
        roots = [Fraction(i - d + m) for m in range(d)]
        return Fraction(1, math.factorial(d)), roots
    scale = Fraction((-1) ** (d - i)) if kind.alternating else Fraction(1)
    return scale, roots


def basis_eval(ctx: BasisContext, i: int, z: complex) -> complex:
    """Value of ``b_i`` at a complex (float) point."""
    scale, roots = basis_factors(ctx, i)
    z = complex(z)
    v = complex(1.0)
    for c in roots:
        v *= z - float(c)
    return v * float(scale)


def basis_eval_exact(ctx: BasisContext, i: int, x, y) -> Tuple[Fraction, Fraction]:
    """Exact ``(Re, Im)`` of ``b_i(x + iy)`` for rational x, y."""
    scale, roots = basis_factors(ctx, i)
    x = Fraction(x)
    y = Fraction(y)
    re, im = Fraction(1), Fraction(0)
    for c in roots:
        a = x - c
        re, im = re * a - im * y, re * y + im * a
    return re * scale, im * scale


def basis_values(ctx: BasisContext, z) -> np.ndarray:
    """All basis values at an array of complex points; shape ``(d+1,) + z.shape``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((ctx.d + 1,) + z.shape, dtype=complex)
    for i in range(ctx.d + 1):
        scale, roots = basis_factors(ctx, i)
        v = np.ones_like(z)
        for c in roots:
            v = v * (z - float(c))
        out[i] = v * float(scale)
    return out


def basis_realimag(ctx: BasisContext, i: int) -> Tuple[BivarPoly, BivarPoly]:
    """Polynomials ``(R_i, I_i)`` with ``R_i + i I_i = b_i(x + iy)``."""
    scale, roots = basis_factors(ctx, i)
    acc = ComplexPoly(ONE, ZERO)
    for c in roots:
        acc = acc * linear_factor(c)
    return acc.re * scale, acc.im * scale


# ---------------------------------------------------------------------------
# syzygies


def _sq(shift) -> BivarPoly:
    """(x - shift)^2 + y^2"""
    t = X - Fraction(shift)
    return t * t + Y * Y


def syzygy_triple(ctx: BasisContext, k: int) -> Tuple[BivarPoly, BivarPoly, BivarPoly]:
    """Triple ``(p_k, q_k, r_k)`` with ``p_k b_k - q_k b_{k+1} + r_k b_{k+2} = 0``.

    The minus sign on ``q`` matches the band ``(p_k, -q_k, r_k)`` of the Gale
    dual column k.
    """
    if not 0 <= k <= ctx.d - 2:
        raise IndexError(f"syzygy index {k} outside 0..{ctx.d - 2}")
    kind, d = ctx.kind, ctx.d
    if kind is BasisKind.POWER:
        return _sq(0), 2 * X, ONE
    if kind is BasisKind.ALT_POWER:
        return _sq(0), -2 * X, ONE
    if kind is BasisKind.FALLING:
        return _sq(k), 2 * (X - k) - 1, ONE
    if kind is BasisKind.RISING:
        return _sq(-k), 2 * (X + k) + 1, ONE
    if kind is BasisKind.ALT_RISING:
        return _sq(-k), -(2 * (X + k) + 1), ONE
    p = _sq(k)
    r = _sq(k + 1 - d)
    return p, p + r - d * (d - 1), r


def triple_values(ctx: BasisContext, k: int, x, y):
    """Numeric ``(p_k, q_k, r_k)`` at arrays x, y (float or object dtype)."""
    kind, d = ctx.kind, ctx.d
    yy = y * y
    one = x * 0 + 1
    if kind in (BasisKind.POWER, BasisKind.ALT_POWER):
        q = 2 * x if kind is BasisKind.POWER else -2 * x
        return x * x + yy, q, one
    if kind is BasisKind.FALLING:
        u = x - k
        return u * u + yy, 2 * u - 1, one
    if kind in (BasisKind.RISING, BasisKind.ALT_RISING):
        u = x + k
        q = 2 * u + 1
        return u * u + yy, (q if kind is BasisKind.RISING else -q), one
    u = x - k
    v = x - (k + 1 - d)
    p = u * u + yy
    r = v * v + yy
    return p, p + r - d * (d - 1), r


# ---------------------------------------------------------------------------
# power-basis conversion


def _poly_from_roots(scale: Fraction, roots: Sequence[Fraction]) -> List[Fraction]:
    coeffs = [Fraction(1)]
    for c in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for t, a in enumerate(coeffs):
            nxt[t + 1] += a
            nxt[t] -= c * a
        coeffs = nxt
    return [a * scale for a in coeffs]


def to_power_matrix(ctx: BasisContext) -> List[List[Fraction]]:
    """Row i holds the power-basis coefficients ``c_0..c_d`` of ``b_i``."""
    rows = []
    for i in range(ctx.d + 1):
        coeffs = _poly_from_roots(*basis_factors(ctx, i))
        rows.append(coeffs + [Fraction(0)] * (ctx.d + 1 - len(coeffs)))
    return rows


# ---------------------------------------------------------------------------
# real roots


def _real_sign(ctx: BasisContext, i: int, x: Fraction) -> int:
    scale, roots = basis_factors(ctx, i)
    v = scale
    for c in roots:
        v *= x - c
    return (v > 0) - (v < 0)


def real_root_locus(ctx: BasisContext, window: Tuple[float, float] | None = None):
    """Closed intervals of x where ``b_i(x) b_j(x) <= 0`` for some ``i != j``.

    Unbounded ends are ``-inf``/``inf`` unless a clipping ``window`` is given.
    Isolated points come back as degenerate intervals ``(a, a)``.
    """
    if ctx.d == 0:
        return []
    breaks = sorted({c for i in range(ctx.d + 1) for c in basis_factors(ctx, i)[1]})

    def mixed(x: Fraction) -> bool:
        signs = {_real_sign(ctx, i, x) for i in range(ctx.d + 1)}
        return 0 in signs or (1 in signs and -1 in signs)

    pieces: List[Tuple[float, float]] = []
    if not breaks:
        return pieces
    # probe each open gap between consecutive breakpoints, plus the two tails
    probes = [breaks[0] - 1] + [(a + b) / 2 for a, b in zip(breaks, breaks[1:])] + [breaks[-1] + 1]
    lefts = [-math.inf] + [float(b) for b in breaks]
    rights = [float(b) for b in breaks] + [math.inf]
    for b in breaks:
        pieces.append((float(b), float(b)))  # some b_i vanishes there
    for probe, lo, hi in zip(probes, lefts, rights):
        if mixed(probe):
            pieces.append((lo, hi))
    pieces.sort()
    merged: List[List[float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    out = [(lo, hi) for lo, hi in merged]
    if window is not None:
        w0, w1 = window
        out = [(max(lo, w0), min(hi, w1)) for lo, hi in out if hi >= w0 and lo <= w1]
    return out
