"""Verification suites shared by the ``verify`` subcommand and the test-suite.

Each suite returns a :class:`CheckResult`; ``passed`` is the verdict and
``detail`` carries the numbers behind it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional

import numpy as np

from .basis import ALL_KINDS, BasisContext, BasisKind, basis_realimag, syzygy_triple
from .contour import closed_count, marching_squares
from .determinant import (
    DTable,
    ExactPoint,
    build_band,
    chromatic_det,
    d_closed_eval,
    d_eval,
    d_polys,
    det_deleted,
)
from .galedual import (
    alt_power_equation_dual,
    build_gale_dual,
    chromatic_equation_dual,
    ehrhart_constraint,
    extend_with_inequality,
    verify_duality,
)
from .randstudy import (
    SampleSpec,
    batch_roots,
    barycenter,
    binomial_barycenter,
    clustering_proxy,
    sample_coefficients,
)
from .rootfind import find_roots_batch
from .rootlocus import (
    _fraction_det,
    admissible_sets,
    angle_sum_array,
    auto_window,
    certificate,
    certificate_residual,
    excluded,
    excluded_with_constraints,
    limiting_circles,
    real_root_locus,
    sigma_quad,
)
from .symbolic import ONE, X, Y, BivarPoly


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        bits = ", ".join(f"{k}={_fmt(v)}" for k, v in self.detail.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.1f}s): {bits}"

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, "seconds": round(self.seconds, 3),
                "detail": {k: _jsonable(v) for k, v in self.detail.items()}}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(t) for t in v]
    return str(v) if not isinstance(v, (str, type(None))) else v


def _timed(name: str, fn: Callable[[], tuple]) -> CheckResult:
    t = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# 1. duality


def check_duality(max_d: int = 10) -> CheckResult:
    def run():
        failures = []
        for kind in ALL_KINDS:
            for d in range(2, max_d + 1):
                ctx = BasisContext(kind, d)
                if not verify_duality(ctx):
                    failures.append(f"{kind.value}:{d}:W*Wbar")
                parts = [basis_realimag(ctx, i) for i in range(d + 1)]
                for k in range(d - 1):
                    p, q, r = syzygy_triple(ctx, k)
                    for part in (0, 1):
                        rel = p * parts[k][part] - q * parts[k + 1][part] + r * parts[k + 2][part]
                        if not rel.is_zero():
                            failures.append(f"{kind.value}:{d}:syzygy{k}")
        return not failures, {"cases": len(ALL_KINDS) * (max_d - 1), "failures": failures[:5]}

    return _timed("duality", run)


# ---------------------------------------------------------------------------
# 2. recursion vs closed form


def check_closed_form(max_d: int = 10, points: int = 1000, seed: int = 2) -> CheckResult:
    def run():
        rng = _rng(seed)
        worst = 0.0
        compared = 0
        for kind in ALL_KINDS:
            for d in range(2, max_d + 1):
                ctx = BasisContext(kind, d)
                x = rng.uniform(-d - 2, d + 2, points)
                y = rng.uniform(0.05, d + 1, points) * rng.choice([-1, 1], points)
                z = x + 1j * y
                P, Q, R = build_band(ctx).triple_values(x, y)
                table = DTable(P, Q, R)
                for j in range(d):
                    for k in range(j + 1, d + 1):
                        a = table.value(j, k)
                        b = d_closed_eval(ctx, j, k, z)
                        err = np.max(np.abs(a - b) / (1e-9 * (1 + np.abs(a))))
                        worst = max(worst, float(err))
                        compared += points
        return worst <= 1.0, {"points": compared, "worst_err_over_tol": worst}

    return _timed("closed-form", run)


# ---------------------------------------------------------------------------
# 3. worked d = 3 example


def check_small_binomial() -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, 3)
        gd = build_gale_dual(ctx)
        (p0, q0, r0), (p1, q1, r1) = gd.triple(0), gd.triple(1)
        expected_q0 = 2 * (X + 1) * (X + 1) + 2 * Y * Y - 4
        ok_q0 = q0 == expected_q0 and r0 == (X + 2) * (X + 2) + Y * Y
        # det of the literal 2x2 matrices with two rows deleted, symbolically
        M = gd.entries

        def det_without(j, k):
            rows = [r for r in range(4) if r not in (j, k)]
            a, b = M[rows[0]], M[rows[1]]
            return a[0] * b[1] - a[1] * b[0]

        checks = {
            "(0,2)": det_without(0, 2) == -q0 * r1,
            "(0,3)": det_without(0, 3) == q0 * q1 - p1 * r0,
            "(1,3)": det_without(1, 3) == -p0 * q1,
        }
        # the product formula agrees at rational points
        pt = ExactPoint(Fraction(2, 3), Fraction(5, 7))
        prod_ok = all(
            det_deleted(ctx, j, k, pt) == det_without(j, k).eval(pt.x, pt.y)
            for j, k in combinations(range(4), 2)
        )
        return ok_q0 and all(checks.values()) and prod_ok, dict(checks, q0=ok_q0, product_formula=prod_ok)

    return _timed("small-binomial", run)


# ---------------------------------------------------------------------------
# 4. power-basis sector


def check_sector(count: int = 10_000, d: int = 6, seed: int = 4) -> CheckResult:
    def run():
        rng = _rng(seed)
        C = 1.0 - rng.random((count, d + 1))  # uniform on (0, 1]
        roots = find_roots_batch(C)
        min_arg = float(np.min(np.abs(np.angle(roots))))
        bound = math.pi / d - 1e-6
        return min_arg >= bound, {"polys": count, "min_abs_arg": min_arg, "pi_over_d": math.pi / d}

    return _timed("sector", run)


# ---------------------------------------------------------------------------
# 5. containment


def check_containment(kind: BasisKind = BasisKind.BINOMIAL, d: int = 6, count: int = 1000,
                      seed: int = 5, N: Optional[float] = None) -> CheckResult:
    def run():
        ctx = BasisContext(kind, d)
        spec = SampleSpec(ctx, N=float(math.factorial(d)) if N is None else N, count=count,
                          seed=seed, ends_nonzero=True)
        batch = batch_roots(ctx, sample_coefficients(spec))
        roots = batch.roots
        nonreal = roots[roots.imag != 0]
        real = roots[roots.imag == 0].real
        detail = {"polys": count, "roots": roots.size, "max_residual": float(batch.residual.max())}
        if kind is BasisKind.BINOMIAL:
            ang = angle_sum_array(d, 0, d, nonreal)
            bad_c = int(np.sum(ang < math.pi - 1e-6))
            bad_r = int(np.sum((real < -d - 1e-9) | (real > d - 1 + 1e-9)))
            detail["min_angle_minus_pi"] = float(ang.min() - math.pi) if ang.size else math.nan
        else:
            bad_c = int(np.sum(excluded(ctx, nonreal))) if nonreal.size else 0
            inside = np.zeros(real.shape, dtype=bool)
            for lo, hi in real_root_locus(ctx):
                inside |= (real >= lo - 1e-9) & (real <= hi + 1e-9)
            bad_r = int(np.sum(~inside))
        detail.update(nonreal_violations=bad_c, real_violations=bad_r)
        return bad_c == 0 and bad_r == 0, detail

    return _timed(f"containment[{kind.value},d={d}]", run)


# ---------------------------------------------------------------------------
# 6. tightness


def _sample_by_angle(d: int, count: int, keep, rng, window) -> np.ndarray:
    x0, x1, y0, y1 = window
    out: List[np.ndarray] = []
    have = 0
    while have < count:
        z = rng.uniform(x0, x1, 8 * count) + 1j * rng.uniform(y0, y1, 8 * count)
        z = z[keep(angle_sum_array(d, 0, d, z))]
        out.append(z)
        have += z.size
    return np.concatenate(out)[:count]


def check_tightness(d: int = 6, count: int = 500, seed: int = 6) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        rng = _rng(seed)
        win = auto_window(d)
        inner = _sample_by_angle(d, count, lambda a: a >= math.pi + 0.01, rng, win)
        big = tuple(2 * v for v in win)
        outer = _sample_by_angle(d, count, lambda a: a <= math.pi - 0.01, rng, big)
        inner_ok = 0
        worst_res = 0.0
        for z in inner:
            a = certificate(ctx, z)
            if a is not None and np.all(a >= 0) and np.any(a > 0):
                res = certificate_residual(ctx, a, z)
                worst_res = max(worst_res, res)
                inner_ok += res <= 1e-9
        no_cert = sum(certificate(ctx, z) is None for z in outer)
        excl = int(np.sum(excluded(ctx, outer)))
        passed = inner_ok == count and no_cert == count and excl == count
        return passed, {"inside_certified": inner_ok, "outside_no_certificate": no_cert,
                        "outside_excluded": excl, "worst_residual": worst_res}

    return _timed("tightness", run)


# ---------------------------------------------------------------------------
# 7. asymptotics


def check_asymptotics(d: int = 8, R: float = 1e4, max_d: int = 10) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        n = d - 1
        target = (-1) ** n * (n + 1)
        ratios = []
        for phi in (math.pi / 6, math.pi / 3, 2 * math.pi / 3):
            ratios.append(float(d_eval(ctx, 0, d, R * complex(math.cos(phi), math.sin(phi)))) / R ** (2 * n))
        num_ok = all(abs(r - target) <= 0.01 * abs(target) for r in ratios)
        r2 = X * X + Y * Y
        sym_fail = []
        for dd in range(2, max_d + 1):
            c = BasisContext(BasisKind.BINOMIAL, dd)
            for j in range(dd):
                for k, poly in d_polys(c, j).items():
                    m = k - j - 1
                    if poly.top_degree_part() != (r2 ** m) * ((-1) ** m * (m + 1)):
                        sym_fail.append((dd, j, k))
        return num_ok and not sym_fail, {"target": target, "ratios": ratios,
                                         "symbolic_failures": sym_fail[:5]}

    return _timed("asymptotics", run)


# ---------------------------------------------------------------------------
# 8. limiting circles


def _bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def _bisect_many(f, lo, hi, iters: int = 80):
    """Vectorised bisection of ``f`` on brackets ``[lo, hi]`` with a sign change."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def check_circles(d: int = 200, j: int = 0, k: int = 4, rays: int = 16) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        circles = limiting_circles(d, j, k)
        c0 = complex(-(d + 1 - k - j) / 2, 0.0)
        worst = 0.0
        counts = []
        ts = np.linspace(1e-3, 4.0 * d, 4000)
        for m in range(rays):
            theta = (m + 0.5) * math.pi / rays
            u = complex(math.cos(theta), math.sin(theta))
            f = lambda t: d_eval(ctx, j, k, c0 + np.asarray(t) * u)
            vals = f(ts)
            idx = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
            zeros = np.sort(_bisect_many(f, ts[idx], ts[idx + 1]))
            counts.append(len(zeros))
            predicted = []
            for c, r in circles:
                w = c - c0
                b = (np.conj(u) * w).real
                t = b + math.sqrt(b * b - (abs(w) ** 2 - r * r))
                predicted.append((t, r))
            predicted.sort()
            if len(zeros) != len(predicted):
                worst = math.inf
                continue
            for t0, (tp, r) in zip(zeros, predicted):
                worst = max(worst, abs(t0 - tp) / r)
        return worst <= 0.01, {"rays": rays, "zeros_per_ray": sorted(set(counts)),
                               "worst_relative_distance": worst}

    return _timed("circles", run)


# ---------------------------------------------------------------------------
# 9. ovals


def check_ovals(d: int = 10, resolution: int = 800) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        win = auto_window(d)
        xs = np.linspace(win[0], win[1], resolution)
        ys = np.linspace(win[2], win[3], resolution)
        Xg, Yg = np.meshgrid(xs, ys)
        field = d_eval(ctx, 0, d, Xg + 1j * Yg)
        lines = marching_squares(field, xs, ys)
        n_closed = closed_count(lines)
        # exact restriction to y = 0 in shifted coordinates
        poly = d_polys(ctx, 0)[d]
        shift = Fraction(-1, 2)
        on_axis = poly.restrict_y0()

        def at(xr: Fraction) -> Fraction:
            x = xr + shift
            return sum((c * x ** i for i, c in on_axis.items()), Fraction(0))

        halves = [Fraction(2 * i - 1, 2) for i in range(1, d + 1)]
        changes = []
        for i in range(d - 1):
            a, b = halves[i], halves[i + 1]
            for s in (1, -1):
                va, vb = at(s * a), at(s * b)
                changes.append(va * vb < 0)
        return n_closed == d - 1 and all(changes), {
            "closed_contours": n_closed, "open_contours": len(lines) - n_closed,
            "sign_changes": f"{sum(changes)}/{len(changes)}", "window": [round(v, 3) for v in win]}

    return _timed("ovals", run)


# ---------------------------------------------------------------------------
# 10. Ehrhart


def check_ehrhart(d: int = 10, count: int = 10_000, seed: int = 10, probes: int = 50,
                  resolution: int = 200) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        con = ehrhart_constraint(d)
        ext = extend_with_inequality(build_gale_dual(ctx), con)
        spec = SampleSpec(ctx, N=1.0, count=count, seed=seed, constraints=(con,))
        coeffs = sample_coefficients(spec)
        assert all(con.holds(a) for a in coeffs)
        roots = batch_roots(ctx, coeffs).roots
        nonreal = roots[roots.imag != 0]
        at_roots = int(np.sum(excluded_with_constraints(ext, nonreal)))
        # grid view: no root inside a cell whose four corners are all excluded
        win = auto_window(d)
        xs = np.linspace(win[0], win[1], resolution)
        ys = np.linspace(win[2], win[3], resolution)
        flags = excluded_with_constraints(ext, xs[None, :] + 1j * ys[:, None])
        ix = np.clip(np.searchsorted(xs, nonreal.real) - 1, 0, resolution - 2)
        iy = np.clip(np.searchsorted(ys, nonreal.imag) - 1, 0, resolution - 2)
        inside = (nonreal.real >= xs[0]) & (nonreal.real <= xs[-1]) & \
                 (nonreal.imag >= ys[0]) & (nonreal.imag <= ys[-1])
        cell = flags[iy, ix] & flags[iy + 1, ix] & flags[iy, ix + 1] & flags[iy + 1, ix + 1]
        in_flagged = int(np.sum(cell & inside))
        # probes just inside the outermost oval with positive real part
        pts = ehrhart_probes(d, probes)
        plain = excluded(ctx, pts)
        refined = excluded_with_constraints(ext, pts)
        gained = int(np.sum(refined & ~plain))
        lost = int(np.sum(plain & ~refined))
        passed = at_roots == 0 and in_flagged == 0 and gained >= 1 and lost == 0
        return passed, {"polys": count, "nonreal_roots": nonreal.size,
                        "roots_flagged_excluded": at_roots, "roots_in_flagged_cells": in_flagged,
                        "probes": probes, "probes_gained": gained, "probes_lost": lost}

    return _timed("ehrhart", run)


def ehrhart_probes(d: int, count: int, seed: int = 11) -> np.ndarray:
    """Points with ``A(0, d; z)`` in ``[pi, pi + 0.05]`` and positive real part."""
    rng = _rng(seed)
    shift = -0.5
    out = []
    targets = rng.uniform(math.pi + 0.001, math.pi + 0.049, 4 * count)
    thetas = rng.uniform(0.02, math.pi / 2, 4 * count)
    for theta, target in zip(thetas, targets):
        u = complex(math.cos(theta), math.sin(theta))
        f = lambda t: float(angle_sum_array(d, 0, d, shift + t * u)) - target
        hi = 1.0
        while f(hi) > 0:
            hi *= 2
        z = shift + _bisect(f, 1e-9, hi) * u
        if z.real > 0:
            out.append(z)
        if len(out) == count:
            break
    return np.array(out)


# ---------------------------------------------------------------------------
# 11. chromatic, alternating power basis


def check_chromatic_altpower(d: int = 6, kappa: int = 1, m: int = 7, side: int = 0) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.ALT_POWER, d)
        ext = alt_power_equation_dual(ctx, kappa, m)
        nx, ny = 40, 25
        xs = np.linspace(-3.0, 3.0, nx)
        ys = np.linspace(-3.0, 3.0, ny)
        z = (xs[None, :] + 1j * ys[:, None]).ravel()
        plain = excluded(ctx, z, first=kappa)
        refined = excluded_with_constraints(ext, z)
        disagree = int(np.sum(plain != refined))
        # sets J containing row d-1 but not row d carry a 0
        last, before = ext.n_rows - 1, ext.n_rows - 2
        offaxis = z[np.abs(z.imag) > 1e-9]
        missing_zero = 0
        checked = 0
        for J in admissible_sets(ext):
            if before in J and last not in J:
                for w in offaxis[:: max(1, offaxis.size // 100)]:
                    checked += 1
                    missing_zero += 0 not in sigma_quad(ext, J, w)
        return disagree == 0 and missing_zero == 0, {
            "grid_points": z.size, "disagreements": disagree,
            "excluded_plain": int(plain.sum()), "excluded_constrained": int(refined.sum()),
            "sigma_sets_checked": checked, "sigma_sets_without_zero": missing_zero}

    return _timed("chromatic-altpower", run)


# ---------------------------------------------------------------------------
# 12. chromatic, binomial basis


def check_chromatic_binomial(d: int = 4, eps=Fraction(1, 2), chi: int = 0, points: int = 200,
                             seed: int = 12) -> CheckResult:
    def run():
        ctx = BasisContext(BasisKind.BINOMIAL, d)
        ext = chromatic_equation_dual(ctx, chi, eps)
        M = ext.matrix()
        n = ext.n_rows
        lam = Fraction(eps) * d * (d - 1)
        gd = ext.base
        xs = np.linspace(-d - 2, d + 1, 121)
        ys = np.linspace(0.02, d + 1, 90)
        Xg, Yg = np.meshgrid(xs, ys)
        empty, nonempty, oracle_fail = [], [], 0
        rng = _rng(seed)
        pts = [ExactPoint(Fraction(int(rng.integers(-60, 40)), 7), Fraction(int(rng.integers(1, 60)), 9))
               for _ in range(points)]
        for K in combinations(range(n), 3):
            keep = [r for r in range(n) if r not in K]
            sym = _poly_det([M[r] for r in keep])
            vals = sym.eval_array(Xg, Yg)
            (nonempty if (vals > 0).any() and (vals < 0).any() else empty).append(K)
            for pt in pts:
                numeric = [[e.eval(pt.x, pt.y) for e in M[r]] for r in keep]
                if _fraction_det(numeric) != chromatic_det(ctx, chi, eps, K, pt):
                    oracle_fail += 1
        # the two empty loci factor into sums of squares
        r = [gd.triple(c)[2] for c in range(gd.n_cols)]
        p = [gd.triple(c)[0] for c in range(gd.n_cols)]
        factored = {}
        if n == 5:
            factored["(0,1,2)"] = _poly_det([M[3], M[4]]) == r[1] * r[2] * lam
            factored["(1,2,3)"] = _poly_det([M[0], M[4]]) == p[0] * r[2] * (-lam)
        passed = (set(empty) == {(0, 1, 2), (1, 2, 3)} and len(nonempty) == 8
                  and oracle_fail == 0 and all(factored.values()))
        return passed, {"empty": empty, "nonempty": len(nonempty), "oracle_mismatches": oracle_fail,
                        "sum_of_squares_factorisation": factored}

    return _timed("chromatic-binomial", run)


def _poly_det(rows) -> BivarPoly:
    """Determinant of a small square matrix of BivarPoly by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = BivarPoly()
    for c in range(n):
        if rows[0][c].is_zero():
            continue
        minor = [[row[x] for x in range(n) if x != c] for row in rows[1:]]
        term = rows[0][c] * _poly_det(minor)
        total = total + (term if c % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# 13. barycenter


def check_barycenter(degrees=(4, 6, 10), points: int = 1000, seed: int = 13,
                     proxy_count: int = 500) -> CheckResult:
    def run():
        rng = _rng(seed)
        worst = 0.0
        for d in degrees:
            ctx = BasisContext(BasisKind.BINOMIAL, d)
            z = rng.uniform(-d - 2, d + 2, points) + 1j * rng.uniform(-d, d, points)
            direct = barycenter(ctx, z)
            closed = binomial_barycenter(d, z)
            worst = max(worst, float(np.max(np.abs(direct - closed) / (1e-10 * (1 + np.abs(direct))))))
        proxy = clustering_proxy(6, proxy_count, seed=0)
        return worst <= 1.0 and proxy.holds, {
            "worst_err_over_tol": worst, "median_at_roots": proxy.median_at_roots,
            "median_uniform": proxy.median_uniform}

    return _timed("barycenter", run)


SUITES: Dict[str, Callable[..., CheckResult]] = {
    "duality": check_duality,
    "closed-form": check_closed_form,
    "small-binomial": check_small_binomial,
    "sector": check_sector,
    "containment": check_containment,
    "tightness": check_tightness,
    "asymptotics": check_asymptotics,
    "circles": check_circles,
    "ovals": check_ovals,
    "ehrhart": check_ehrhart,
    "chromatic-altpower": check_chromatic_altpower,
    "chromatic-binomial": check_chromatic_binomial,
    "barycenter": check_barycenter,
}
