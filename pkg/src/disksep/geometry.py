"""Geometric primitives and predicates for disks and points.

All predicates share one explicit :class:`TolerancePolicy`.  ``eps`` decides
on/off questions (is a point on a circle, are two circles tangent), while
``min_feature`` is the larger margin that general position must respect so
that later ``eps`` decisions are never borderline.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateInput, PerturbationFailed


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Disk:
    id: int
    center: Point
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk {self.id}: radius must be positive, got {self.radius}")
        if not (math.isfinite(self.center.x) and math.isfinite(self.center.y)):
            raise ValueError(f"disk {self.id}: non-finite center")

    @property
    def cx(self) -> float:
        return self.center.x

    @property
    def cy(self) -> float:
        return self.center.y


@dataclass(frozen=True)
class TolerancePolicy:
    eps: float = 1e-9
    min_feature: float = 1e-6

    def __post_init__(self):
        if not 0 < self.eps < self.min_feature:
            raise ValueError("tolerance policy needs 0 < eps < min_feature")


DEFAULT_TOL = TolerancePolicy()


class Containment(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


def make_disk(id: int, x: float, y: float, r: float = 1.0) -> Disk:
    return Disk(id, Point(float(x), float(y)), float(r))


def distance(p: Point, q: Point) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def circle_circle_intersect(d1: Disk, d2: Disk, tol: TolerancePolicy = DEFAULT_TOL) -> list[Point]:
    """Intersection points of the two boundary circles.

    The first point lies to the left of the directed line from ``d1``'s
    center to ``d2``'s center.  Tangent (or coincident) circles raise
    :class:`DegenerateInput`.
    """
    if d1.id == d2.id:
        raise ValueError("circle_circle_intersect needs two distinct disks")
    dx, dy = d2.cx - d1.cx, d2.cy - d1.cy
    d = math.hypot(dx, dy)
    r1, r2 = d1.radius, d2.radius
    if abs(d - (r1 + r2)) <= tol.eps or abs(d - abs(r1 - r2)) <= tol.eps:
        raise DegenerateInput(f"circles {d1.id} and {d2.id} are tangent or coincident")
    if d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    ux, uy = dx / d, dy / d
    mx, my = d1.cx + a * ux, d1.cy + a * uy
    return [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]


def point_in_disk(p: Point, d: Disk, tol: TolerancePolicy = DEFAULT_TOL) -> Containment:
    gap = math.hypot(p[0] - d.cx, p[1] - d.cy) - d.radius
    if abs(gap) <= tol.eps:
        return Containment.BOUNDARY
    return Containment.INSIDE if gap < 0 else Containment.OUTSIDE


def disks_overlap(d1: Disk, d2: Disk, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return math.hypot(d2.cx - d1.cx, d2.cy - d1.cy) < d1.radius + d2.radius - tol.eps


def disk_arrays(disks: Sequence[Disk]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centers x, centers y and radii as float arrays."""
    if not disks:
        empty = np.zeros(0)
        return empty, empty.copy(), empty.copy()
    cx = np.fromiter((d.cx for d in disks), float, len(disks))
    cy = np.fromiter((d.cy for d in disks), float, len(disks))
    r = np.fromiter((d.radius for d in disks), float, len(disks))
    return cx, cy, r


def overlap_matrix(disks: Sequence[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Boolean matrix of :func:`disks_overlap`, with a false diagonal."""
    cx, cy, r = disk_arrays(disks)
    dist = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])
    m = dist < r[:, None] + r[None, :] - tol.eps
    np.fill_diagonal(m, False)
    return m


def covering_disks(p: Point, disks: Sequence[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> list[Disk]:
    """Disks containing ``p`` strictly; a point on some circle raises."""
    out = []
    for d in disks:
        state = point_in_disk(p, d, tol)
        if state is Containment.BOUNDARY:
            raise DegenerateInput(f"point {tuple(p)} lies on the circle of disk {d.id}")
        if state is Containment.INSIDE:
            out.append(d)
    return out


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a[0] - p[0], a[1] - p[1]
    vx, vy = b[0] - a[0], b[1] - a[1]
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0 else min(1.0, max(0.0, -(ax * vx + ay * vy) / vv))
    return math.hypot(ax + t * vx, ay + t * vy)


def segment_disk_distance(a: Point, b: Point, d: Disk) -> float:
    """Euclidean distance from the disk center to segment ``ab``."""
    return point_segment_distance(d.center, a, b)


def segment_disk_interval(a: Point, b: Point, d: Disk) -> tuple[float, float] | None:
    """Parameter range ``[t0, t1]`` of segment ``ab`` inside the closed disk."""
    ax, ay = a[0] - d.cx, a[1] - d.cy
    vx, vy = b[0] - a[0], b[1] - a[1]
    qa = vx * vx + vy * vy
    qb = 2 * (ax * vx + ay * vy)
    qc = ax * ax + ay * ay - d.radius * d.radius
    if qa == 0:
        return (0.0, 1.0) if qc <= 0 else None
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return None
    sq = math.sqrt(disc)
    t0 = (-qb - sq) / (2 * qa)
    t1 = (-qb + sq) / (2 * qa)
    lo, hi = max(t0, 0.0), min(t1, 1.0)
    if lo > hi:
        return None
    return lo, hi


# --- general position -------------------------------------------------------


def _pair_intersections(disks: Sequence[Disk]):
    """All circle-circle crossings as (point, i, j), skipping degenerate pairs."""
    out = []
    cx, cy, r = disk_arrays(disks)
    n = len(disks)
    if n < 2:
        return out
    dist = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])
    ii, jj = np.nonzero(np.triu((dist < r[:, None] + r[None, :]) & (dist > np.abs(r[:, None] - r[None, :])), 1))
    for i, j in zip(ii.tolist(), jj.tolist()):
        try:
            pts = circle_circle_intersect(disks[i], disks[j])
        except DegenerateInput:
            continue
        for p in pts:
            out.append((p, i, j))
    return out


def general_position_violations(
    disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL
) -> tuple[set[int], set[int]]:
    """Indices of disks and of points that break a general-position margin.

    Checked: tangencies and coincident circles, three circles through a
    common point, two circle-intersection points closer than ``min_feature``
    and input points within ``min_feature`` of a circle.
    """
    mf = tol.min_feature
    bad_disks: set[int] = set()
    bad_points: set[int] = set()
    cx, cy, r = disk_arrays(disks)
    n = len(disks)
    if n >= 2:
        dist = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])
        near = (np.abs(dist - (r[:, None] + r[None, :])) < mf) | (np.abs(dist - np.abs(r[:, None] - r[None, :])) < mf)
        ii, jj = np.nonzero(np.triu(near, 1))
        bad_disks.update(ii.tolist())
        bad_disks.update(jj.tolist())

    crossings = _pair_intersections(disks)
    if crossings:
        vx = np.array([c[0].x for c in crossings])
        vy = np.array([c[0].y for c in crossings])
        owner_i = np.array([c[1] for c in crossings])
        owner_j = np.array([c[2] for c in crossings])
        gap = np.abs(np.hypot(vx[:, None] - cx[None, :], vy[:, None] - cy[None, :]) - r[None, :])
        gap[np.arange(len(crossings)), owner_i] = np.inf
        gap[np.arange(len(crossings)), owner_j] = np.inf
        rows, cols = np.nonzero(gap < mf)
        for a, k in zip(rows.tolist(), cols.tolist()):
            bad_disks.update((int(owner_i[a]), int(owner_j[a]), k))
        tree = cKDTree(np.column_stack([vx, vy]))
        for a, b in tree.query_pairs(mf):
            bad_disks.update((int(owner_i[a]), int(owner_j[a]), int(owner_i[b]), int(owner_j[b])))

    for k, p in enumerate(points):
        if n and np.any(np.abs(np.hypot(p[0] - cx, p[1] - cy) - r) < mf):
            bad_points.add(k)
    return bad_disks, bad_points


def _push_off_circles(p: Point, disks: Sequence[Disk], mf: float, rng: np.random.Generator, first: bool) -> Point:
    """Displace ``p`` by at most ``mf`` per coordinate, away from its nearest circle."""
    cx, cy, r = disk_arrays(disks)
    dist = np.hypot(p[0] - cx, p[1] - cy)
    k = int(np.argmin(np.abs(dist - r)))
    if first and dist[k] > 0:
        ux, uy = (p[0] - cx[k]) / dist[k], (p[1] - cy[k]) / dist[k]
        side = np.sign(dist[k] - r[k]) or rng.choice([-1.0, 1.0])
        ux, uy = side * ux, side * uy
    else:
        theta = rng.uniform(0, 2 * math.pi)
        ux, uy = math.cos(theta), math.sin(theta)
    scale = mf / max(abs(ux), abs(uy))
    return Point(p[0] + ux * scale, p[1] + uy * scale)


def perturb_to_general_position(
    disks: Sequence[Disk],
    points: Sequence[Point],
    tol: TolerancePolicy = DEFAULT_TOL,
    seed: int = 0,
    max_retries: int = 200,
) -> tuple[list[Disk], list[Point]]:
    """Nudge offending disks and points until general position holds.

    Every output coordinate stays within ``min_feature`` of its input value;
    generic inputs come back unchanged.
    """
    orig_disks = list(disks)
    orig_points = [Point(float(p[0]), float(p[1])) for p in points]
    cur_disks, cur_points = list(orig_disks), list(orig_points)
    rng = np.random.default_rng(seed)
    mf = tol.min_feature
    for attempt in range(max_retries + 1):
        bad_d, bad_p = general_position_violations(cur_disks, cur_points, tol)
        if not bad_d and not bad_p:
            return cur_disks, cur_points
        if attempt == max_retries:
            break
        for i in bad_d:
            jitter = rng.uniform(-mf, mf, 2)
            c = orig_disks[i].center
            cur_disks[i] = replace(orig_disks[i], center=Point(c.x + jitter[0], c.y + jitter[1]))
        for k in bad_p:
            cur_points[k] = _push_off_circles(orig_points[k], cur_disks, mf, rng, first=attempt == 0)
    raise PerturbationFailed(f"general position not reached after {max_retries} retries")
