"""Command-line interface.

Every output file carries a manifest with the full argument list, so
``galeroot replay FILE`` regenerates it byte for byte.

Exit status: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .basis import BasisContext, BasisKind, DegenerateDegreeError
from .contour import marching_squares
from .determinant import d_eval, det_extended
from .galedual import (
    ConstraintKind,
    ExtendedDual,
    LinearConstraint,
    alt_power_equation_dual,
    build_gale_dual,
    chromatic_equation_dual,
    ehrhart_constraint,
    extend_with_equation,
    extend_with_inequality,
)
from .grid import FieldKind, RegionGrid, RunManifest, emit_csv, emit_svg
from .randstudy import SampleSpec, barycenter, batch_roots, default_window, sample_coefficients
from .rootlocus import (
    _SignAccumulator,
    _is_real,
    _table,
    _triple_signs,
    auto_window,
    excluded,
    excluded_with_constraints,
)
from .verify import SUITES, CheckResult


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_window(text: str, ctx: BasisContext) -> Tuple[float, float, float, float]:
    if text == "auto":
        return auto_window(ctx.d)
    if text == "default":
        return default_window(ctx)
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected x0,x1,y0,y1 | auto | default")
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise UsageError(f"bad window {text!r}; expected x0<x1, y0<y1")
    return vals


def parse_grid(text: str) -> Tuple[int, int]:
    try:
        parts = [int(v) for v in text.lower().split("x")]
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected N or NXxNY")
    nx, ny = (parts[0], parts[0]) if len(parts) == 1 else parts[:2]
    if nx < 2 or ny < 2:
        raise UsageError("grid resolution must be at least 2x2")
    return nx, ny


def parse_pairs(text: str, d: int) -> List[Tuple[int, int]]:
    if text == "all":
        return [(j, k) for j in range(d) for k in range(j + 1, d + 1)]
    out = []
    for item in text.split(";"):
        try:
            j, k = (int(v) for v in item.split(","))
        except ValueError:
            raise UsageError(f"bad pair {item!r}; expected j,k")
        if not 0 <= j < k <= d:
            raise UsageError(f"pair {(j, k)} outside 0 <= j < k <= {d}")
        out.append((j, k))
    return out


def parse_constraint(text: Optional[str], ctx: BasisContext):
    """``(extended dual or None, constraints for sampling)``."""
    if not text:
        return None, ()
    d = ctx.d
    head, _, arg = text.partition(":")
    try:
        if head == "ehrhart-s0":
            con = ehrhart_constraint(d)
            return extend_with_inequality(build_gale_dual(ctx), con), (con,)
        if head == "chromatic-binomial":
            chi_s, eps_s = arg.split(",")
            ext = chromatic_equation_dual(ctx, int(chi_s), Fraction(eps_s))
            return ext, ext.equations
        if head == "chromatic-altpower":
            kappa_s, m_s = arg.split(",")
            ext = alt_power_equation_dual(ctx, int(kappa_s), int(m_s))
            return ext, ext.equations
        if head == "custom":
            *lam, kind = arg.split(",")
            con = LinearConstraint(tuple(Fraction(v) for v in lam), ConstraintKind(kind))
            if len(con.lam) != d + 1:
                raise UsageError(f"custom constraint needs {d + 1} coefficients")
            gd = build_gale_dual(ctx)
            ext = extend_with_inequality(gd, con) if con.kind.is_inequality else extend_with_equation(gd, con)
            return ext, (con,)
    except UsageError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad constraint {text!r}: {exc}")
    raise UsageError(f"unknown constraint {text!r}")


def _ctx(args) -> BasisContext:
    try:
        return BasisContext(BasisKind.parse(args.basis), args.d)
    except ValueError as exc:
        raise UsageError(str(exc))


def _strip_out(argv: Sequence[str]) -> List[str]:
    """Arguments without ``--out``, so a replay to another path gives identical bytes."""
    res, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--out":
            skip = True
        elif not a.startswith("--out="):
            res.append(a)
    return res


def _manifest(args, argv: Sequence[str], ctx: BasisContext, window=None, res=None) -> RunManifest:
    return RunManifest(
        command=args.command, basis=ctx.kind.value, d=ctx.d,
        seed=getattr(args, "seed", None), window=window, resolution=res,
        constraint=getattr(args, "constraint", None), version=__version__, argv=_strip_out(argv),
    )


def _targets(out: str, fmt: str) -> Tuple[Optional[Path], Optional[Path]]:
    base = Path(out)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    csv = base.with_suffix(".csv") if fmt in ("csv", "both") else None
    svg = base.with_suffix(".svg") if fmt in ("svg", "both") else None
    return csv, svg


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _with_suffix(out: str, tag: str) -> str:
    p = Path(out)
    stem = p.with_suffix("") if p.suffix in (".csv", ".svg") else p
    return str(stem) + f"_{tag}"


# ---------------------------------------------------------------------------
# commands


def cmd_curves(args, argv) -> int:
    ctx = _ctx(args)
    ctx.require_complex()
    window = parse_window(args.window, ctx)
    nx, ny = parse_grid(args.grid)
    pairs = parse_pairs(args.pairs, ctx.d)
    manifest = _manifest(args, argv, ctx, window, (nx, ny))
    layers = []
    fields = []
    for j, k in pairs:
        grid = RegionGrid.sample(lambda z: d_eval(ctx, j, k, z), window, nx, ny, FieldKind.D_VALUE)
        lines = [] if k == j + 1 else marching_squares(grid.values, grid.xs, grid.ys)
        layers.append((f"D_{j}_{k}", lines))
        fields.append(((j, k), grid, lines))
    csv, svg = _targets(args.out, args.format)
    if csv is not None:
        for (j, k), grid, _ in fields:
            target = csv if len(fields) == 1 else Path(_with_suffix(str(csv), f"D{j}_{k}") + ".csv")
            _write(target, emit_csv(grid, _manifest(args, argv, ctx, window, (nx, ny))))
    if svg is not None:
        _write(svg, emit_svg(window, layers, manifest=manifest))
    for (j, k), _, lines in fields:
        closed = sum(ln.closed for ln in lines)
        print(f"D_{j},{k}: {len(lines)} contours ({closed} closed)")
    return 0


def cmd_region(args, argv) -> int:
    ctx = _ctx(args)
    ctx.require_complex()
    window = parse_window(args.window, ctx)
    nx, ny = parse_grid(args.grid)
    ext, _ = parse_constraint(args.constraint, ctx)
    manifest = _manifest(args, argv, ctx, window, (nx, ny))
    if ext is None:
        kind, fn = FieldKind.EXCLUDED, lambda z: excluded(ctx, z)
    else:
        kind = FieldKind.EXCLUDED_CONSTRAINED
        fn = lambda z: excluded_with_constraints(ext, z, strict=not args.weak)
    grid = RegionGrid.sample(fn, window, nx, ny, kind)
    layers = [("boundary", marching_squares(grid.values.astype(float), grid.xs, grid.ys, 0.5))]
    extra = []
    if args.per_triple:
        for i, j, k in combinations(range(ctx.d + 1), 3):
            g = RegionGrid.sample(lambda z: _in_triple(ctx, (i, j, k), z), window, nx, ny, FieldKind.CUSTOM_DET)
            layers.append((f"S_{i}{j}{k}", marching_squares(g.values.astype(float), g.xs, g.ys, 0.5)))
            extra.append((f"S{i}_{j}_{k}", g))
    if args.loci and ext is not None:
        for tag, g in _constraint_loci(ext, window, nx, ny):
            layers.append((tag, marching_squares(g.values, g.xs, g.ys)))
            extra.append((tag, g))
    csv, svg = _targets(args.out, args.format)
    if csv is not None:
        _write(csv, emit_csv(grid, manifest))
        for tag, g in extra:
            _write(Path(_with_suffix(str(csv), tag) + ".csv"),
                   emit_csv(g, _manifest(args, argv, ctx, window, (nx, ny))))
    if svg is not None:
        _write(svg, emit_svg(window, layers, manifest=_manifest(args, argv, ctx, window, (nx, ny))))
    share = float(np.mean(grid.values))
    print(f"excluded share of window: {share:.4f}")
    return 0


def _in_triple(ctx: BasisContext, K, z) -> np.ndarray:
    """Indicator of the set where the triple K fails to exclude (per point)."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real.ravel(), z.imag.ravel()
    table = _table(ctx, x, y)
    acc = _SignAccumulator(x.shape)
    for s in _triple_signs(table, *K):
        acc.add(s)
    out = ~acc.both & ~_is_real(x, y)
    return out.reshape(z.shape)


def _constraint_loci(ext: ExtendedDual, window, nx, ny):
    """Determinant fields whose zero loci bound the refined regions."""
    ctx = ext.ctx
    out = []
    if ext.m == 1 and ext.column_transform is None:
        lam = ext.inequalities[0].lam
        for k in range(1, ctx.d):
            g = RegionGrid.sample(lambda z, k=k: det_extended(ctx, (0, k, ctx.d), lam, z),
                                  window, nx, ny, FieldKind.CUSTOM_DET)
            out.append((f"det_0_{k}_{ctx.d}", g))
        return out
    for K in combinations(range(ext.n_rows), ext.n_rows - ext.n_cols):
        keep = [r for r in range(ext.n_rows) if r not in K]

        def fn(z, keep=keep):
            z = np.asarray(z, dtype=complex)
            return np.linalg.det(ext.evaluate(z.real, z.imag)[..., keep, :])

        g = RegionGrid.sample(fn, window, nx, ny, FieldKind.CUSTOM_DET)
        out.append(("det_" + "_".join(str(v) for v in K), g))
    return out


def cmd_roots(args, argv) -> int:
    ctx = _ctx(args)
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    _, constraints = parse_constraint(args.constraint, ctx)
    spec = SampleSpec(ctx, N=args.bound, count=args.count, seed=args.seed,
                      ends_nonzero=args.ends_nonzero, constraints=constraints)
    coeffs = sample_coefficients(spec)
    batch = batch_roots(ctx, coeffs)
    manifest = _manifest(args, argv, ctx)
    lines = [f"# manifest: {manifest.to_json()}", "poly_index,re,im,is_real,residual"]
    for n, r, res in zip(batch.poly_index, batch.roots, batch.residual):
        lines.append(f"{n},{r.real:.17g},{r.imag:.17g},{int(r.imag == 0)},{res:.17g}")
    csv, svg = _targets(args.out, args.format)
    if csv is not None:
        _write(csv, "\n".join(lines) + "\n")
    if svg is not None:
        window = parse_window(args.window, ctx)
        nx, ny = parse_grid(args.grid)
        layers = []
        if ctx.d >= 2:
            ext, _ = parse_constraint(args.constraint, ctx)
            fn = (lambda z: excluded(ctx, z)) if ext is None else (lambda z: excluded_with_constraints(ext, z))
            g = RegionGrid.sample(fn, window, nx, ny, FieldKind.EXCLUDED)
            layers.append(("boundary", marching_squares(g.values.astype(float), g.xs, g.ys, 0.5)))
        _write(svg, emit_svg(window, layers, points=batch.roots, manifest=manifest))
    print(f"{args.count} polynomials, {batch.roots.size} roots, max residual {batch.residual.max():.3g}")
    return 0


def cmd_barycenter(args, argv) -> int:
    ctx = _ctx(args)
    window = parse_window(args.window, ctx)
    nx, ny = parse_grid(args.grid)
    manifest = _manifest(args, argv, ctx, window, (nx, ny))
    grid = RegionGrid.sample(lambda z: np.abs(barycenter(ctx, z)), window, nx, ny, FieldKind.BARYCENTER_ABS)
    vals = grid.values[grid.values > 0]
    lo, hi = (float(vals.min()), float(vals.max())) if vals.size else (1.0, 1.0)
    lo = max(lo, hi * 1e-12)
    levels = np.geomspace(lo * 10, hi / 10, args.levels) if hi > lo * 100 else [0.5 * (lo + hi)]
    layers = [(f"beta_{i}", marching_squares(grid.values, grid.xs, grid.ys, float(c)))
              for i, c in enumerate(levels)]
    roots = None
    if args.count > 0:
        spec = SampleSpec(ctx, N=args.bound, count=args.count, seed=args.seed, ends_nonzero=True)
        roots = batch_roots(ctx, sample_coefficients(spec)).roots
    csv, svg = _targets(args.out, args.format)
    if csv is not None:
        _write(csv, emit_csv(grid, manifest))
    if svg is not None:
        _write(svg, emit_svg(window, layers, points=roots, manifest=manifest))
    i = int(np.argmin(grid.values))
    zmin = grid.points().ravel()[i]
    print(f"min |beta| on grid: {grid.values.ravel()[i]:.4g} at {zmin.real:.4g}{zmin.imag:+.4g}i")
    return 0


def cmd_verify(args, argv) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results: List[CheckResult] = []
    for name in names:
        kwargs = {}
        if name == "containment":
            if args.basis:
                kwargs["kind"] = BasisKind.parse(args.basis)
            if args.d is not None:
                kwargs["d"] = args.d
            if args.n is not None:
                kwargs["count"] = args.n
            if args.seed is not None:
                kwargs["seed"] = args.seed
        elif args.n is not None and name in ("sector", "ehrhart"):
            kwargs["count"] = args.n
        res = SUITES[name](**kwargs)
        results.append(res)
        print(res.line(), flush=True)
    report = {"version": __version__, "argv": list(argv), "passed": all(r.passed for r in results),
              "results": [r.to_dict() for r in results]}
    if args.json:
        text = json.dumps(report, indent=2, sort_keys=True)
        if args.json == "-":
            print(text)
        else:
            _write(Path(args.json), text + "\n")
    return 0 if report["passed"] else 1


def cmd_replay(args, argv) -> int:
    text = Path(args.file).read_text()
    first = text.splitlines()[0] if text else ""
    marker = "# manifest: "
    if first.startswith(marker):
        manifest = RunManifest.from_json(first[len(marker):])
    elif "<!-- manifest: " in text:
        body = text.split("<!-- manifest: ", 1)[1].split(" -->", 1)[0]
        manifest = RunManifest.from_json(body.replace("- -", "--"))
    else:
        raise UsageError(f"{args.file} has no manifest")
    return main(list(manifest.argv) + ["--out", args.out or str(Path(args.file).with_suffix(""))])


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, grid: bool = True) -> None:
    p.add_argument("--basis", default="binomial",
                   help="power | falling | rising | binomial | alt-power | alt-rising")
    p.add_argument("-d", type=int, default=6, help="degree")
    if grid:
        p.add_argument("--window", default="default", help="x0,x1,y0,y1 | auto | default")
        p.add_argument("--grid", default="800", help="N or NXxNY sample points")
    p.add_argument("--out", default="galeroot_out", help="output path (suffix chosen by --format)")
    p.add_argument("--format", choices=("csv", "svg", "both"), default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galeroot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="zero curves of D_{j,k}")
    _common(p)
    p.add_argument("--pairs", default="0,6", help="'j,k;j,k' or 'all'")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("region", help="excluded / not-excluded field")
    _common(p)
    p.add_argument("--constraint", default=None,
                   help="ehrhart-s0 | chromatic-binomial:chi,eps | chromatic-altpower:kappa,m | "
                        "custom:l0,..,ld,le|lt|eq")
    p.add_argument("--per-triple", action="store_true", help="also emit one S_ijk layer per triple")
    p.add_argument("--loci", action="store_true", help="also emit constraint determinant fields")
    p.add_argument("--weak", action="store_true", help="use every index set, not only those with slack rows")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("roots", help="roots of random nonnegative polynomials")
    _common(p)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--bound", type=float, default=1.0, help="coefficients uniform in [0, N]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--constraint", default=None)
    p.add_argument("--ends-nonzero", action="store_true")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("barycenter", help="|beta| field with log-spaced contours")
    _common(p)
    p.add_argument("--levels", type=int, default=12)
    p.add_argument("--count", type=int, default=0, help="overlay roots of this many samples")
    p.add_argument("--bound", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_barycenter)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=["all"] + list(SUITES))
    p.add_argument("--basis", default=None)
    p.add_argument("-d", type=int, default=None)
    p.add_argument("-n", type=int, default=None, help="sample count")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", default=None, help="write a JSON report (path or '-')")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-run the command recorded in an output's manifest")
    p.add_argument("file")
    p.add_argument("--out", default=None, help="write to a different path")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except (UsageError, DegenerateDegreeError, IndexError) as exc:
        print(f"galeroot: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
