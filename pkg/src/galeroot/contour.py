"""Marching squares on a regular grid.

Corners with value ``>= level`` count as inside.  Saddle cells are split
according to the mean of their four corners.  Segments are stitched into
polylines through shared edge keys, so every crossing point is computed once
and shared by both neighbouring cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

EdgeKey = Tuple[str, int, int]

# edges of cell (i, j): bottom (i, j)-(i, j+1), right (i, j+1)-(i+1, j+1),
# top (i+1, j)-(i+1, j+1), left (i, j)-(i+1, j)
_B, _R, _T, _L = 0, 1, 2, 3

# corner bits: 1 = (i, j), 2 = (i, j+1), 4 = (i+1, j+1), 8 = (i+1, j)
_SEGMENTS = {
    1: [(_L, _B)], 2: [(_B, _R)], 3: [(_L, _R)], 4: [(_R, _T)],
    6: [(_B, _T)], 7: [(_L, _T)], 8: [(_T, _L)], 9: [(_T, _B)],
    11: [(_T, _R)], 12: [(_R, _L)], 13: [(_R, _B)], 14: [(_B, _L)],
}
# saddles: (center inside, center outside)
_SADDLES = {
    5: ([(_L, _T), (_R, _B)], [(_L, _B), (_R, _T)]),
    10: ([(_B, _L), (_T, _R)], [(_B, _R), (_T, _L)]),
}


@dataclass
class Polyline:
    points: np.ndarray  # (n, 2) array of (x, y)
    closed: bool


def _edge_key(i: int, j: int, e: int) -> EdgeKey:
    if e == _B:
        return ("h", i, j)
    if e == _T:
        return ("h", i + 1, j)
    if e == _L:
        return ("v", i, j)
    return ("v", i, j + 1)


def marching_squares(field, xs, ys, level: float = 0.0) -> List[Polyline]:
    """Level curves of ``field[iy, ix]`` sampled at ``(xs[ix], ys[iy])``."""
    F = np.asarray(field, dtype=float)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if F.shape != (ys.size, xs.size):
        raise ValueError(f"field shape {F.shape} does not match grid {(ys.size, xs.size)}")
    inside = F >= level
    case = (inside[:-1, :-1] * 1 + inside[:-1, 1:] * 2
            + inside[1:, 1:] * 4 + inside[1:, :-1] * 8)
    cells = np.argwhere((case != 0) & (case != 15))

    points: Dict[EdgeKey, Tuple[float, float]] = {}

    def crossing(key: EdgeKey) -> Tuple[float, float]:
        if key in points:
            return points[key]
        kind, i, j = key
        if kind == "h":
            a, b = F[i, j], F[i, j + 1]
            t = (level - a) / (b - a) if b != a else 0.5
            pt = (xs[j] + t * (xs[j + 1] - xs[j]), ys[i])
        else:
            a, b = F[i, j], F[i + 1, j]
            t = (level - a) / (b - a) if b != a else 0.5
            pt = (xs[j], ys[i] + t * (ys[i + 1] - ys[i]))
        points[key] = pt
        return pt

    links: Dict[EdgeKey, List[EdgeKey]] = {}
    for i, j in cells:
        c = int(case[i, j])
        if c in _SADDLES:
            center = F[i:i + 2, j:j + 2].mean() >= level
            segs = _SADDLES[c][0 if center else 1]
        else:
            segs = _SEGMENTS[c]
        for e1, e2 in segs:
            k1, k2 = _edge_key(i, j, e1), _edge_key(i, j, e2)
            links.setdefault(k1, []).append(k2)
            links.setdefault(k2, []).append(k1)

    lines: List[Polyline] = []
    seen = set()

    def walk(start: EdgeKey) -> Tuple[List[EdgeKey], bool]:
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in links[cur] if k != prev]
            nxt = [k for k in nxt if k not in seen or (k == start and len(chain) > 2)]
            if not nxt:
                return chain, False
            k = nxt[0]
            if k == start:
                return chain, True
            chain.append(k)
            seen.add(k)
            prev, cur = cur, k

    # open chains start at degree-1 keys (window boundary)
    for key, nb in links.items():
        if len(nb) == 1 and key not in seen:
            chain, _ = walk(key)
            lines.append(Polyline(np.array([crossing(k) for k in chain]), False))
    for key in links:
        if key not in seen:
            chain, closed = walk(key)
            pts = [crossing(k) for k in chain]
            if closed:
                pts.append(pts[0])
            lines.append(Polyline(np.array(pts), closed))
    return lines


def closed_count(lines: List[Polyline]) -> int:
    return sum(1 for ln in lines if ln.closed)
