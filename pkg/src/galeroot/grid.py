"""Sample grids over a window of the complex plane, with CSV and SVG output.

CSV layout: a ``# manifest: <json>`` header line, then ``x,y,value`` and one
row per grid point (y outer, x inner) written with 17 significant digits.
"""

from __future__ import annotations

import enum
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .contour import Polyline

Window = Tuple[float, float, float, float]


class FieldKind(enum.Enum):
    D_VALUE = "d-value"
    EXCLUDED = "excluded"
    EXCLUDED_CONSTRAINED = "excluded-constrained"
    ANGLE_SUM = "angle-sum"
    BARYCENTER_ABS = "barycenter-abs"
    CUSTOM_DET = "custom-det"


@dataclass
class RunManifest:
    """Everything needed to regenerate an output file."""

    command: str
    basis: str
    d: int
    seed: Optional[int] = None
    window: Optional[Window] = None
    resolution: Optional[Tuple[int, int]] = None
    constraint: Optional[str] = None
    version: str = ""
    argv: List[str] = field(default_factory=list)
    extra: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        if data["window"] is not None:
            data["window"] = [float(v) for v in data["window"]]
        if data["resolution"] is not None:
            data["resolution"] = [int(v) for v in data["resolution"]]
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        if data.get("window") is not None:
            data["window"] = tuple(data["window"])
        if data.get("resolution") is not None:
            data["resolution"] = tuple(data["resolution"])
        return cls(**data)


@dataclass
class RegionGrid:
    window: Window
    nx: int
    ny: int
    values: np.ndarray  # shape (ny, nx)
    field_kind: FieldKind = FieldKind.D_VALUE

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        x0, x1, y0, y1 = self.window
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate window {self.window}")
        self.values = np.asarray(self.values).reshape(self.ny, self.nx)

    @classmethod
    def sample(cls, fn, window: Window, nx: int, ny: int, kind: FieldKind) -> "RegionGrid":
        g = cls(window, nx, ny, np.zeros((ny, nx)), kind)
        g.values = np.asarray(fn(g.points())).reshape(ny, nx)
        return g

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.window[0], self.window[1], self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.window[2], self.window[3], self.ny)

    def points(self) -> np.ndarray:
        X, Y = np.meshgrid(self.xs, self.ys)
        return X + 1j * Y

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegionGrid):
            return NotImplemented
        return (
            tuple(self.window) == tuple(other.window)
            and (self.nx, self.ny) == (other.nx, other.ny)
            and self.field_kind == other.field_kind
            and np.array_equal(np.asarray(self.values, dtype=float), np.asarray(other.values, dtype=float))
        )


def emit_csv(grid: RegionGrid, manifest: Optional[RunManifest] = None) -> str:
    manifest = manifest or RunManifest("grid", "", 0)
    manifest.window = tuple(float(v) for v in grid.window)
    manifest.resolution = (grid.nx, grid.ny)
    manifest.extra = dict(manifest.extra, field_kind=grid.field_kind.value)
    buf = io.StringIO()
    buf.write(f"# manifest: {manifest.to_json()}\n")
    buf.write("x,y,value\n")
    xs, ys = grid.xs, grid.ys
    vals = np.asarray(grid.values)
    is_bool = vals.dtype == bool
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            v = vals[iy, ix]
            buf.write(f"{x:.17g},{y:.17g},{int(v) if is_bool else format(float(v), '.17g')}\n")
    return buf.getvalue()


def parse_csv(text: str) -> Tuple[RegionGrid, RunManifest]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# manifest: "):
        raise ValueError("missing manifest header")
    manifest = RunManifest.from_json(lines[0][len("# manifest: "):])
    if lines[1].strip() != "x,y,value":
        raise ValueError("missing column header")
    nx, ny = manifest.resolution
    vals = np.array([float(ln.rsplit(",", 1)[1]) for ln in lines[2:] if ln], dtype=float)
    if vals.size != nx * ny:
        raise ValueError(f"expected {nx * ny} rows, found {vals.size}")
    kind = FieldKind(manifest.extra.get("field_kind", FieldKind.D_VALUE.value))
    return RegionGrid(tuple(manifest.window), nx, ny, vals.reshape(ny, nx), kind), manifest


def emit_svg(window: Window, layers: Sequence[Tuple[str, Sequence[Polyline]]],
             points: Optional[np.ndarray] = None, manifest: Optional[RunManifest] = None) -> str:
    """One ``<path>`` per polyline; the y axis is flipped so up is positive."""
    x0, x1, y0, y1 = window
    w, h = x1 - x0, y1 - y0
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.17g} {-y1:.17g} {w:.17g} {h:.17g}">'
    ]
    if manifest is not None:
        out.append(f"<!-- manifest: {manifest.to_json().replace('--', '- -')} -->")
    for cls, lines in layers:
        for ln in lines:
            if len(ln.points) < 2:
                continue
            coords = " L ".join(f"{x:.6g} {-y:.6g}" for x, y in ln.points)
            tail = " Z" if ln.closed else ""
            out.append(f'<path class="{cls}" d="M {coords}{tail}"/>')
    if points is not None:
        for z in np.asarray(points).ravel():
            out.append(f'<circle class="root" cx="{z.real:.6g}" cy="{-z.imag:.6g}" r="{0.004 * w:.3g}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
