"""Ground truth at small scale.

``exact_min_separator`` finds a minimum separator by enumerating subsets in
order of size.  ``grid_flood_separates`` is an independent separation test:
it rasterizes the disks twice, once blocking every cell that might touch a
disk and once blocking only cells certainly inside one, and flood-fills
both.  The first raster can only under-connect and the second can only
over-connect, so when they agree the answer is certain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np
from scipy import ndimage

from .arrangement import separates_all, union_boundary
from .errors import ResolutionExhausted, TooLarge
from .geometry import DEFAULT_TOL, Disk, Point, TolerancePolicy, disk_arrays, overlap_matrix

DEFAULT_MAX_N = 20
DEFAULT_RESOLUTION = 0.02
MAX_REFINEMENTS = 4
MAX_GRID_CELLS = 40_000_000

ProbeHook = Callable[[tuple[int, ...], bool], None]


def _components(members: list[int], adj: list[int]) -> int:
    remaining = 0
    for i in members:
        remaining |= 1 << i
    count = 0
    while remaining:
        frontier = remaining & -remaining
        seen = 0
        while frontier:
            seen |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & remaining & ~seen
        remaining &= ~seen
        count += 1
    return count


@dataclass
class _Prepared:
    disks: list[Disk]
    points: list[Point]
    adj: list[int]
    cover: list[int]
    # per point: disk index -> (start angle, angular width) of the disk as seen from the point
    shadows: list[dict[int, tuple[float, float]]]


def _prepare(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy) -> _Prepared:
    disks = sorted(disks, key=lambda d: d.id)
    n = len(disks)
    ov = overlap_matrix(disks, tol) if n else np.zeros((0, 0), bool)
    adj = [sum(1 << j for j in np.nonzero(ov[i])[0].tolist()) for i in range(n)]
    cx, cy, r = disk_arrays(disks)
    cover, shadows = [], []
    for p in points:
        dist = np.hypot(cx - p[0], cy - p[1])
        cover.append(sum(1 << i for i in np.nonzero(dist < r)[0].tolist()))
        sh = {}
        for i in range(n):
            if dist[i] > r[i]:
                half = math.asin(r[i] / dist[i])
                sh[i] = ((math.atan2(cy[i] - p[1], cx[i] - p[0]) - half) % (2 * math.pi), 2 * half)
        shadows.append(sh)
    return _Prepared(disks, list(points), adj, cover, shadows)


def _surrounded(shadow: dict[int, tuple[float, float]], members: list[int]) -> bool:
    """Do the members' angular shadows cover every direction from the point?"""
    spans = []
    for i in members:
        if i in shadow:
            start, width = shadow[i]
            end = start + width
            if end > 2 * math.pi:
                spans.append((0.0, end - 2 * math.pi))
                end = 2 * math.pi
            spans.append((start, end))
    spans.sort()
    reach = 0.0
    for start, end in spans:
        if start > reach:
            return False
        reach = max(reach, end)
    return reach >= 2 * math.pi


def _could_separate(prep: _Prepared, members: list[int]) -> bool:
    """Cheap necessary condition; False only for subsets that cannot separate."""
    mask = 0
    for i in members:
        mask |= 1 << i
    free = [k for k, c in enumerate(prep.cover) if not c & mask]
    if len(free) <= 1:
        return True
    edges = sum(bin(prep.adj[i] & mask).count("1") for i in members) // 2
    if edges <= len(members) - _components(members, prep.adj):
        return False  # a forest of disks has a simply connected union
    exposed = sum(1 for k in free if not _surrounded(prep.shadows[k], members))
    return exposed <= 1


def precheck_rejects(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when the cheap pre-check rules the whole of ``disks`` out as a separator of ``points``."""
    prep = _prepare(disks, points, tol)
    return not _could_separate(prep, list(range(len(prep.disks))))


def exact_min_separator(
    disks: Sequence[Disk],
    points: Sequence[Point],
    max_n: int = DEFAULT_MAX_N,
    tol: TolerancePolicy = DEFAULT_TOL,
    on_probe: ProbeHook | None = None,
) -> frozenset[int]:
    """Smallest subset of ``disks`` separating every pair of ``points``.

    Subsets are tried by size, and lexicographically by disk id within a
    size, so the answer is the canonical first optimum.  ``on_probe`` sees
    every subset that reaches the full separation test.
    """
    if len(disks) > max_n:
        raise TooLarge(f"{len(disks)} disks exceed the enumeration limit {max_n}")
    if len(points) <= 1:
        return frozenset()
    prep = _prepare(disks, points, tol)
    n = len(prep.disks)
    for size in range(n + 1):
        for members in combinations(range(n), size):
            members = list(members)
            if not _could_separate(prep, members):
                continue
            chosen = [prep.disks[i] for i in members]
            ok = separates_all(union_boundary(chosen, tol), prep.points, tol)
            if on_probe is not None:
                on_probe(tuple(d.id for d in chosen), ok)
            if ok:
                return frozenset(d.id for d in chosen)
    raise ValueError("the full disk set does not separate the points")


def exact_min_two_point(
    disks: Sequence[Disk], s: Point, t: Point, max_n: int = DEFAULT_MAX_N, tol: TolerancePolicy = DEFAULT_TOL, on_probe: ProbeHook | None = None
) -> frozenset[int]:
    return exact_min_separator(disks, [s, t], max_n, tol, on_probe)


def _flood_verdicts(disks: Sequence[Disk], p: Point, q: Point, res: float) -> tuple[bool, bool]:
    cx, cy, r = disk_arrays(disks)
    pad = 2 * (r.max() if len(r) else 1.0)
    xs = np.concatenate([cx - r, cx + r, [p[0], q[0]]])
    ys = np.concatenate([cy - r, cy + r, [p[1], q[1]]])
    x0, y0 = xs.min() - pad, ys.min() - pad
    nx_ = int(math.ceil((xs.max() + pad - x0) / res))
    ny_ = int(math.ceil((ys.max() + pad - y0) / res))
    if nx_ * ny_ > MAX_GRID_CELLS:
        raise ResolutionExhausted(f"grid of {nx_}x{ny_} cells is too large")
    half_diag = res * math.sqrt(0.5)
    maybe = np.zeros((ny_, nx_), dtype=bool)
    surely = np.zeros((ny_, nx_), dtype=bool)
    for x, y, rad in zip(cx, cy, r):
        reach = rad + half_diag
        i0 = max(int((x - reach - x0) / res) - 1, 0)
        i1 = min(int((x + reach - x0) / res) + 2, nx_)
        j0 = max(int((y - reach - y0) / res) - 1, 0)
        j1 = min(int((y + reach - y0) / res) + 2, ny_)
        gx = x0 + (np.arange(i0, i1) + 0.5) * res
        gy = y0 + (np.arange(j0, j1) + 0.5) * res
        dist = np.hypot(gx[None, :] - x, gy[:, None] - y)
        maybe[j0:j1, i0:i1] |= dist < rad + half_diag
        surely[j0:j1, i0:i1] |= dist < rad - half_diag
    pi, pj = int((p[0] - x0) / res), int((p[1] - y0) / res)
    qi, qj = int((q[0] - x0) / res), int((q[1] - y0) / res)
    cons, _ = ndimage.label(~maybe)  # 4-connected: only certainly free cells
    opt, _ = ndimage.label(~surely, structure=np.ones((3, 3), dtype=int))
    cons_sep = cons[pj, pi] == 0 or cons[pj, pi] != cons[qj, qi]
    opt_sep = opt[pj, pi] != opt[qj, qi]
    return bool(cons_sep), bool(opt_sep)


def grid_flood_separates(
    disks: Sequence[Disk], p: Point, q: Point, resolution: float = DEFAULT_RESOLUTION, refinements: int = MAX_REFINEMENTS
) -> bool:
    """Separation decided on a grid; refines until both rasterizations agree."""
    cx, cy, r = disk_arrays(disks)
    for pt in (p, q):
        if len(r) and np.any(np.hypot(cx - pt[0], cy - pt[1]) < r):
            return True
    if not disks:
        return False
    res = resolution
    for _ in range(refinements + 1):
        cons_sep, opt_sep = _flood_verdicts(disks, p, q, res)
        if cons_sep == opt_sep:
            return cons_sep
        res /= 2
    raise ResolutionExhausted(f"rasterizations still disagree at cell size {res * 2:g}")


def grid_flood_separates_all(disks: Sequence[Disk], points: Sequence[Point], resolution: float = DEFAULT_RESOLUTION) -> bool:
    return all(grid_flood_separates(disks, p, q, resolution) for p, q in combinations(points, 2))
