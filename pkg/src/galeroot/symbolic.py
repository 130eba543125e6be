"""Exact bivariate polynomials in (x, y) over the rationals.

A :class:`BivarPoly` is an immutable sparse map ``(deg_x, deg_y) -> Fraction``
with no stored zeros.  It is the carrier for the real and imaginary parts of
basis polynomials, the syzygy triples and the tridiagonal determinants.

>>> p = (X + Y) * (X - Y)
>>> p
x^2 - y^2
>>> p(3, 1)
Fraction(8, 1)
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[int, int]
Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class BivarPoly:
    """Sparse polynomial in two variables with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in monomial {(i, j)}")
                c = _as_fraction(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "BivarPoly":
        # caller guarantees Fraction values with zeros already dropped
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> "BivarPoly":
        return cls({(i, j): c})

    # -- container protocol -------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda t: (-sum(t[0]), -t[0][0])))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_y(self) -> int:
        return max((j for _, j in self._terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, BivarPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == BivarPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        return BivarPoly.const(other)

    def __add__(self, other) -> "BivarPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return BivarPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "BivarPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BivarPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BivarPoly":
        if not isinstance(other, BivarPoly):
            c = _as_fraction(other)
            if not c:
                return BivarPoly()
            return BivarPoly._raw({m: v * c for m, v in self._terms.items()})
        out: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return BivarPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise ValueError("negative power")
        result = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, c) -> "BivarPoly":
        c = _as_fraction(c)
        return self * (1 / c)

    # -- transforms ---------------------------------------------------------

    def shift_x(self, c: Scalar) -> "BivarPoly":
        """Return ``q`` with ``q(x, y) = self(x + c, y)``."""
        c = _as_fraction(c)
        out: Dict[Monomial, Fraction] = {}
        for (i, j), a in self._terms.items():
            # binomial expansion of (x + c)^i
            for t in range(i + 1):
                v = a * math.comb(i, t) * c ** (i - t)
                if v:
                    out[(t, j)] = out.get((t, j), 0) + v
        return BivarPoly._raw({m: v for m, v in out.items() if v})

    def top_degree_part(self) -> "BivarPoly":
        deg = self.degree()
        return BivarPoly._raw({m: c for m, c in self._terms.items() if sum(m) == deg})

    def is_even_in_y(self) -> bool:
        return all(j % 2 == 0 for _, j in self._terms)

    def restrict_y0(self) -> Dict[int, Fraction]:
        """Univariate coefficients (power of x -> coefficient) of p(x, 0)."""
        return {i: c for (i, j), c in self._terms.items() if j == 0}

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x, y):
        return self.eval(x, y)

    def eval(self, x: Scalar, y: Scalar) -> Fraction:
        """Exact value at a rational point."""
        x = _as_fraction(x)
        y = _as_fraction(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    def eval_f(self, x: float, y: float) -> float:
        """Float value; terms are summed with ``math.fsum``."""
        x = float(x)
        y = float(y)
        return math.fsum(float(c) * x**i * y**j for (i, j), c in self._terms.items())

    def eval_array(self, x, y):
        """Elementwise value on numpy arrays (float or object dtype)."""
        import numpy as np

        x = np.asarray(x)
        y = np.asarray(y)
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.result_type(x, y, float))
        if x.dtype == object or y.dtype == object:
            out = out.astype(object)
            for (i, j), c in self._terms.items():
                out = out + c * x**i * y**j
            return out
        for (i, j), c in self._terms.items():
            out = out + float(c) * x**i * y**j
        return out

    # -- display ------------------------------------------------------------

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self.items():
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


X = BivarPoly.monomial(1, 0)
Y = BivarPoly.monomial(0, 1)
ONE = BivarPoly.const(1)
ZERO = BivarPoly()


def add(a: BivarPoly, b: BivarPoly) -> BivarPoly:
    return a + b


def mul(a: BivarPoly, b: BivarPoly) -> BivarPoly:
    return a * b


def shift_x(p: BivarPoly, c: Scalar) -> BivarPoly:
    return p.shift_x(c)


def evaluate(p: BivarPoly, x: Scalar, y: Scalar) -> Fraction:
    return p.eval(x, y)


def eval_f(p: BivarPoly, x: float, y: float) -> float:
    return p.eval_f(x, y)


def poly_sum(polys: Iterable[BivarPoly]) -> BivarPoly:
    out: Dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p._terms.items():
            out[m] = out.get(m, 0) + c
    return BivarPoly._raw({m: c for m, c in out.items() if c})


class ComplexPoly:
    """Pair ``(re, im)`` of BivarPolys standing for ``re + i*im`` as a function of x + iy."""

    __slots__ = ("re", "im")

    def __init__(self, re: BivarPoly, im: BivarPoly):
        self.re = re
        self.im = im

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        if not isinstance(other, ComplexPoly):
            return ComplexPoly(self.re * other, self.im * other)
        return ComplexPoly(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(self.re + other.re, self.im + other.im)


def linear_factor(c: Scalar) -> ComplexPoly:
    """``(x + iy) - c`` for a rational constant c."""
    return ComplexPoly(X - _as_fraction(c), Y)
