"""Independent reference computations used by the tests."""

from fractions import Fraction

import numpy as np


def frac_det(rows):
    """Exact determinant by fraction Gaussian elimination."""
    A = [[Fraction(v) for v in row] for row in rows]
    n = len(A)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


def eval_matrix(M, x, y):
    """Evaluate a matrix of BivarPoly at a rational point."""
    return [[e.eval(x, y) for e in row] for row in M]


def drop(rows, idx):
    return [row for i, row in enumerate(rows) if i not in set(idx)]


def drop_col(rows, c):
    return [[v for j, v in enumerate(row) if j != c] for row in rows]


def match_roots(a, b):
    """Largest distance under the best one-to-one matching."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if a.size else 0.0


def lp_nonneg_root(values):
    """True iff some a >= 0 with sum a = 1 has sum a_i v_i = 0 (v complex)."""
    from scipy.optimize import linprog

    v = np.asarray(values, dtype=complex)
    scale = np.maximum(np.abs(v), 1e-300)
    w = v / scale
    A = np.vstack([w.real, w.imag, np.ones(v.size)])
    res = linprog(np.zeros(v.size), A_eq=A, b_eq=[0, 0, 1], bounds=[(0, None)] * v.size,
                  method="highs")
    return res.status == 0
