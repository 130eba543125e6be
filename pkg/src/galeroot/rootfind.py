"""Simultaneous root finding (Aberth-Ehrlich) for polynomials in any basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .basis import BasisContext, basis_factors, to_power_matrix

MAX_ITER = 200
STEP_TOL = 1e-14
RESIDUAL_TOL = 1e-10
REAL_TOL = 1e-8
# irrational offset so that initial guesses never sit on a symmetry axis
_ROTATION = 0.4 + math.sqrt(2) / 10


class RootFindError(RuntimeError):
    """Raised when the iteration fails the residual contract."""


@dataclass(frozen=True)
class PolynomialInBasis:
    ctx: BasisContext
    coeffs: Tuple

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.d + 1:
            raise ValueError(f"expected {self.ctx.d + 1} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.coeffs) and any(a > 0 for a in self.coeffs)

    def value_and_derivative(self, z):
        """``f(z)`` and ``f'(z)`` from the factored basis elements."""
        z = np.asarray(z, dtype=complex)
        f = np.zeros_like(z)
        df = np.zeros_like(z)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            scale, roots = basis_factors(self.ctx, i)
            v = np.ones_like(z)
            dv = np.zeros_like(z)
            for c in roots:
                t = z - float(c)
                dv = dv * t + v
                v = v * t
            f = f + float(a) * float(scale) * v
            df = df + float(a) * float(scale) * dv
        return f, df

    def magnitude(self, z):
        """``sum |a_i| |b_i(z)|``, the scale for relative residuals."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            scale, roots = basis_factors(self.ctx, i)
            v = np.ones(z.shape)
            for c in roots:
                v = v * np.abs(z - float(c))
            out = out + abs(float(a)) * abs(float(scale)) * v
        return out


def to_power(p: PolynomialInBasis) -> np.ndarray:
    """Power-basis coefficients ``c_0..c_d``, converted exactly then floated."""
    M = to_power_matrix(p.ctx)
    exact = all(isinstance(a, (int, Fraction)) for a in p.coeffs)
    if exact:
        out = [sum(Fraction(a) * M[i][j] for i, a in enumerate(p.coeffs)) for j in range(p.ctx.d + 1)]
        return np.array([float(v) for v in out])
    Mf = np.array([[float(v) for v in row] for row in M])
    return np.asarray(p.coeffs, dtype=float) @ Mf


def _horner(c, z):
    """Value and derivative of polynomials ``c`` (batch, n+1, low to high) at z (batch, n)."""
    p = np.broadcast_to(c[:, -1:], z.shape).astype(complex)
    dp = np.zeros_like(p)
    for j in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, j:j + 1]
    return p, dp


def residual_ok(c, roots, tol: float = RESIDUAL_TOL) -> np.ndarray:
    """``|f(r)| <= tol * sum |c_j| |r|^j`` per root (batched)."""
    c = np.atleast_2d(np.asarray(c, dtype=float))
    roots = np.atleast_2d(roots)
    f, _ = _horner(c.astype(complex), roots)
    mag, _ = _horner(np.abs(c).astype(complex), np.abs(roots).astype(complex))
    return np.abs(f) <= tol * np.abs(mag)


def _aberth(c: np.ndarray, max_iter: int = MAX_ITER):
    """Aberth-Ehrlich on a batch of polynomials of one degree with nonzero ends."""
    B, n1 = c.shape
    n = n1 - 1
    c = c / c[:, -1:]
    radius = 1 + np.max(np.abs(c[:, :-1]), axis=1)  # Cauchy bound
    ang = 2 * np.pi * np.arange(n) / n + _ROTATION
    z = radius[:, None] * np.exp(1j * ang)[None, :]
    ccomp = c.astype(complex)
    active = np.ones(B, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        zz = z[idx]
        p, dp = _horner(ccomp[idx], zz)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0, p / dp)
            diff = zz[:, :, None] - zz[:, None, :]
            np.einsum("bii->bi", diff)[...] = 1.0
            inv = 1.0 / diff
            np.einsum("bii->bi", inv)[...] = 0.0
            step = ratio / (1 - ratio * inv.sum(axis=2))
        step = np.where(np.isfinite(step), step, 0)
        z[idx] = zz - step
        done = np.all(np.abs(step) <= STEP_TOL * (1 + np.abs(z[idx])), axis=1)
        active[idx[done]] = False
    return z, ~active


def _strip(c: np.ndarray):
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ValueError("all coefficients are zero")
    return c[nz[0]:nz[-1] + 1], int(nz[0])


def _snap_real(r):
    r = np.asarray(r, dtype=complex)
    real = np.abs(r.imag) <= REAL_TOL * (1 + np.abs(r))
    return np.where(real, r.real + 0j, r)


def find_roots(c: Sequence[float], max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots of ``sum c_j z^j`` (low-to-high coefficients), with multiplicity.

    Zero roots from vanishing low coefficients are reported explicitly.
    Raises RootFindError if a root misses the residual contract.
    """
    c = np.asarray(c, dtype=float)
    core, n_zero = _strip(c)
    zeros = np.zeros(n_zero, dtype=complex)
    if core.size == 1:
        return zeros
    if core.size == 2:
        roots = np.array([-core[0] / core[1]], dtype=complex)
    else:
        roots, converged = _aberth(core[None, :], max_iter)
        roots = roots[0]
        ok = residual_ok(core, roots)[0]
        if not ok.all():
            raise RootFindError(
                f"{int((~ok).sum())} of {roots.size} roots miss the residual bound"
                + ("" if converged[0] else f" after {max_iter} iterations")
            )
    return np.concatenate([zeros, _snap_real(roots)])


def find_roots_batch(C, max_iter: int = MAX_ITER) -> np.ndarray:
    """Roots of many polynomials of the same degree with nonzero end coefficients.

    ``C`` has shape ``(batch, n+1)``; returns ``(batch, n)``.  Polynomials
    whose roots fail the residual bound are retried one by one.
    """
    C = np.asarray(C, dtype=float)
    if np.any(C[:, 0] == 0) or np.any(C[:, -1] == 0):
        raise ValueError("find_roots_batch needs nonzero end coefficients; use find_roots")
    roots, _ = _aberth(C, max_iter)
    ok = residual_ok(C, roots).all(axis=1)
    for b in np.flatnonzero(~ok):
        roots[b] = find_roots(C[b], max_iter=4 * max_iter)
    return _snap_real(roots)


def polish(p: PolynomialInBasis, roots, steps: int = 3) -> np.ndarray:
    """Newton steps on the basis form; a step is kept only if ``|f|`` drops."""
    z = np.asarray(roots, dtype=complex).copy()
    f, df = p.value_and_derivative(z)
    for _ in range(steps):
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - f / df
        cand = np.where(np.isfinite(cand), cand, z)
        fc, dfc = p.value_and_derivative(cand)
        better = np.abs(fc) < np.abs(f)
        z = np.where(better, cand, z)
        f = np.where(better, fc, f)
        df = np.where(better, dfc, df)
    return _snap_real(z)


def roots_in_basis(p: PolynomialInBasis, do_polish: bool = True) -> np.ndarray:
    roots = find_roots(to_power(p))
    return polish(p, roots) if do_polish else roots


def basis_residual(p: PolynomialInBasis, roots) -> np.ndarray:
    """Relative basis-form residual ``|f(r)| / sum |a_i b_i(r)|``."""
    f, _ = p.value_and_derivative(roots)
    mag = p.magnitude(roots)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(mag > 0, np.abs(f) / mag, np.abs(f))
