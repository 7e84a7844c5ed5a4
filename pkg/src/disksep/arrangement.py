"""Boundary of a union of disks and face identity in its complement.

Under general position the boundary of the union is a set of pairwise
disjoint simple closed curves made of circular arcs.  A point outside every
disk is identified with the set of boundary cycles that enclose it; two such
points lie in the same complement face exactly when these sets agree.  That
is enough to decide separation without building a full face structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, RayDegeneracy
from .geometry import (
    DEFAULT_TOL,
    Disk,
    Point,
    TolerancePolicy,
    circle_circle_intersect,
    disk_arrays,
)

TWO_PI = 2 * math.pi
RAY_RETRIES = 32
RAY_SEED = 20100612


@dataclass(frozen=True)
class Arc:
    disk_id: int
    start_angle: float
    end_angle: float
    endpoints: tuple[Point, Point] | None = None  # None for a full circle

    @property
    def full(self) -> bool:
        return self.endpoints is None

    @property
    def sweep(self) -> float:
        if self.full:
            return TWO_PI
        return (self.end_angle - self.start_angle) % TWO_PI

    @property
    def mid_angle(self) -> float:
        return (self.start_angle + self.sweep / 2) % TWO_PI


@dataclass(frozen=True)
class BoundaryCycle:
    cycle_id: int
    arcs: tuple[Arc, ...]


@dataclass(frozen=True)
class FaceSignature:
    covered: bool
    enclosing_cycles: frozenset[int] = frozenset()


@dataclass(frozen=True, eq=False)
class UnionBoundary:
    disks: tuple[Disk, ...]
    cycles: tuple[BoundaryCycle, ...]
    tol: TolerancePolicy = DEFAULT_TOL
    # per-cycle data derived at construction
    signed_area: tuple[float, ...] = ()
    cycle_enclosure: tuple[frozenset[int], ...] = ()
    _arc_table: dict = field(default_factory=dict, repr=False)

    @property
    def arcs(self) -> list[Arc]:
        return [a for c in self.cycles for a in c.arcs]

    def disk(self, disk_id: int) -> Disk:
        return self._arc_table["by_id"][disk_id]

    def is_hole(self, cycle_id: int) -> bool:
        """A hole cycle has the union on its outside and a bounded face inside."""
        return self.signed_area[cycle_id] < 0

    # -- point queries ---------------------------------------------------

    def covered(self, p: Point) -> bool:
        cx, cy, r = self._arc_table["disks"]
        if len(cx) == 0:
            return False
        gap = np.hypot(p[0] - cx, p[1] - cy) - r
        if np.any(gap < -self.tol.eps):
            return True
        if np.any(np.abs(gap) <= self.tol.eps):
            raise DegenerateInput(f"point {tuple(p)} lies on a circle")
        return False

    def crossing_parity(self, p: Point, exclude_cycle: int | None = None) -> np.ndarray:
        """Boolean array: does a ray from ``p`` cross each cycle an odd number of times."""
        t = self._arc_table
        ncyc = len(self.cycles)
        if ncyc == 0:
            return np.zeros(0, dtype=bool)
        cx, cy, r, start, sweep, cyc = t["cx"], t["cy"], t["r"], t["start"], t["sweep"], t["cycle"]
        mask = cyc != exclude_cycle if exclude_cycle is not None else np.ones(len(cx), dtype=bool)
        px, py = p[0] - cx[mask], p[1] - cy[mask]
        rr, st, sw, cc = r[mask], start[mask], sweep[mask], cyc[mask]
        eps = self.tol.eps
        rng = np.random.default_rng(RAY_SEED)
        for _ in range(RAY_RETRIES):
            theta = rng.uniform(0, TWO_PI)
            ux, uy = math.cos(theta), math.sin(theta)
            b = px * ux + py * uy
            c = px * px + py * py - rr * rr
            disc = b * b - c
            if np.any(np.abs(disc) <= eps * rr):
                continue  # ray grazes a circle
            ok = disc > 0
            sq = np.sqrt(np.where(ok, disc, 0.0))
            degenerate = False
            counts = np.zeros(ncyc, dtype=np.int64)
            for sign in (-1.0, 1.0):
                tt = -b + sign * sq
                hit = ok & (tt > eps)
                if not np.any(hit):
                    continue
                hx = px + tt * ux
                hy = py + tt * uy
                rel = np.mod(np.arctan2(hy, hx) - st, TWO_PI)
                ang_tol = eps / rr
                partial = sw < TWO_PI
                near_end = partial & hit & ((rel < ang_tol) | (np.abs(rel - sw) < ang_tol) | (rel > TWO_PI - ang_tol))
                if np.any(near_end):
                    degenerate = True
                    break
                inside = hit & (~partial | (rel < sw))
                np.add.at(counts, cc[inside], 1)
            if not degenerate:
                return (counts % 2).astype(bool)
        raise RayDegeneracy(f"no clean ray direction from {tuple(p)} after {RAY_RETRIES} tries")

    def signatures(self, pts: np.ndarray) -> list[FaceSignature]:
        """Signatures of many points at once; rows of ``pts`` are (x, y)."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            return []
        cx, cy, r = self._arc_table["disks"]
        if len(cx):
            gap = np.hypot(pts[:, 0:1] - cx[None, :], pts[:, 1:2] - cy[None, :]) - r[None, :]
            covered = np.any(gap < -self.tol.eps, axis=1)
            on_circle = ~covered & np.any(np.abs(gap) <= self.tol.eps, axis=1)
            if np.any(on_circle):
                raise DegenerateInput("a point lies on a circle")
        else:
            covered = np.zeros(len(pts), dtype=bool)
        out: list[FaceSignature | None] = [FaceSignature(True) if c else None for c in covered]
        t = self._arc_table
        if not self.cycles:
            return [s or FaceSignature(False) for s in out]
        todo = np.nonzero(~covered)[0]
        px = pts[todo, 0:1] - t["cx"][None, :]
        py = pts[todo, 1:2] - t["cy"][None, :]
        rr, st, sw = t["r"][None, :], t["start"][None, :], t["sweep"][None, :]
        theta = np.random.default_rng(RAY_SEED).uniform(0, TWO_PI)
        ux, uy = math.cos(theta), math.sin(theta)
        eps = self.tol.eps
        b = px * ux + py * uy
        disc = b * b - (px * px + py * py - rr * rr)
        bad = np.any(np.abs(disc) <= eps * rr, axis=1)
        ok = disc > 0
        sq = np.sqrt(np.where(ok, disc, 0.0))
        hits = np.zeros(px.shape, dtype=np.int64)
        partial = sw < TWO_PI
        for sign in (-1.0, 1.0):
            tt = -b + sign * sq
            hit = ok & (tt > eps)
            rel = np.mod(np.arctan2(py + tt * uy, px + tt * ux) - st, TWO_PI)
            ang_tol = eps / rr
            bad |= np.any(partial & hit & ((rel < ang_tol) | (np.abs(rel - sw) < ang_tol) | (rel > TWO_PI - ang_tol)), axis=1)
            hits += hit & (~partial | (rel < sw))
        ncyc = len(self.cycles)
        per_cycle = np.zeros((len(todo), ncyc), dtype=np.int64)
        for c in range(ncyc):
            per_cycle[:, c] = hits[:, t["cycle"] == c].sum(axis=1)
        for row, k in enumerate(todo.tolist()):
            if bad[row]:
                out[k] = self.signature(Point(*pts[k]))
            else:
                out[k] = FaceSignature(False, frozenset(np.nonzero(per_cycle[row] % 2)[0].tolist()))
        return out

    def signature(self, p: Point) -> FaceSignature:
        if self.covered(p):
            return FaceSignature(True)
        parity = self.crossing_parity(p)
        return FaceSignature(False, frozenset(np.nonzero(parity)[0].tolist()))

    def bounding_cycles(self, sig: FaceSignature) -> list[int]:
        """Cycles on the boundary of the complement face with signature ``sig``."""
        if sig.covered:
            raise ValueError("covered points have no complement face")
        enclosing = sig.enclosing_cycles
        out = []
        for cid, encl in enumerate(self.cycle_enclosure):
            if encl == enclosing:
                out.append(cid)  # directly inside the face
            elif cid in enclosing and encl == enclosing - {cid}:
                out.append(cid)  # the innermost cycle around the face
        return out

    def hole_count(self) -> int:
        return sum(1 for a in self.signed_area if a < 0)


# -- construction ------------------------------------------------------------


def _arc_area_term(d: Disk, start: float, sweep: float) -> float:
    """Contribution of a counterclockwise arc to the shoelace integral of x dy - y dx."""
    end = start + sweep
    r = d.radius
    return r * r * sweep + r * (d.cx * (math.sin(end) - math.sin(start)) - d.cy * (math.cos(end) - math.cos(start)))


def _angle(d: Disk, p: Point) -> float:
    return math.atan2(p.y - d.cy, p.x - d.cx) % TWO_PI


def _build(disks: tuple[Disk, ...], tol: TolerancePolicy) -> UnionBoundary:
    n = len(disks)
    ids = [d.id for d in disks]
    if len(set(ids)) != n:
        raise ValueError("disk ids must be unique")
    cx, cy, r = disk_arrays(disks)
    dist = np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :]) if n else np.zeros((0, 0))

    # vertices on each circle: (angle, vertex key)
    on_circle: list[list[tuple[float, tuple]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rs, rd = r[i] + r[j], abs(r[i] - r[j])
            if dist[i, j] > rs + tol.eps or dist[i, j] < rd - tol.eps:
                continue
            pts = circle_circle_intersect(disks[i], disks[j], tol)  # raises on tangency
            for k, p in enumerate(pts):
                key = (i, j, k)
                on_circle[i].append((_angle(disks[i], p), key, p))
                on_circle[j].append((_angle(disks[j], p), key, p))

    # candidate arcs: (owner index, start angle, end angle, start key, end key, p0, p1); None keys = full circle
    cands = []
    for i, d in enumerate(disks):
        verts = sorted(on_circle[i], key=lambda v: v[0])
        if not verts:
            cands.append((i, 0.0, TWO_PI, None, None, None, None))
            continue
        m = len(verts)
        if m == 1:
            raise DegenerateInput(f"single vertex on circle {d.id}")
        for a in range(m):
            a0, k0, p0 = verts[a]
            a1, k1, p1 = verts[(a + 1) % m]
            sweep = (a1 - a0) % TWO_PI
            if sweep == 0:
                raise DegenerateInput(f"coincident vertices on circle {d.id}")
            cands.append((i, a0, a0 + sweep, k0, k1, p0, p1))

    full_arcs: list[Arc] = []
    start_at: dict[tuple, tuple[Arc, tuple]] = {}  # vertex key -> (arc starting there, end vertex key)
    if cands:
        owner = np.array([c[0] for c in cands])
        mid = np.array([(c[1] + c[2]) / 2 for c in cands])
        mx = cx[owner] + r[owner] * np.cos(mid)
        my = cy[owner] + r[owner] * np.sin(mid)
        gap = np.hypot(mx[:, None] - cx[None, :], my[:, None] - cy[None, :]) - r[None, :]
        gap[np.arange(len(cands)), owner] = np.inf
        if np.any(np.abs(gap) <= tol.eps):
            raise DegenerateInput("arc midpoint on a third circle; input not in general position")
        keep = np.all(gap > 0, axis=1)
        for c, kept in zip(cands, keep.tolist()):
            if not kept:
                continue
            i, a0, a1, k0, k1, p0, p1 = c
            if k0 is None:
                full_arcs.append(Arc(disks[i].id, 0.0, 0.0, None))
                continue
            if k0 in start_at:
                raise DegenerateInput("two boundary arcs leave the same vertex")
            start_at[k0] = (Arc(disks[i].id, a0, a1 % TWO_PI, (p0, p1)), k1)

    cycles: list[BoundaryCycle] = []
    for arc in full_arcs:
        cycles.append(BoundaryCycle(len(cycles), (arc,)))
    pending = dict(start_at)
    while pending:
        key0 = min(pending)
        seq = []
        key = key0
        while True:
            if key not in pending:
                raise DegenerateInput("union boundary does not close up")
            arc, nxt = pending.pop(key)
            seq.append(arc)
            key = nxt
            if key == key0:
                break
        cycles.append(BoundaryCycle(len(cycles), tuple(seq)))

    by_id = {d.id: d for d in disks}
    arcs = [(c.cycle_id, a) for c in cycles for a in c.arcs]
    table = {
        "by_id": by_id,
        "disks": (cx, cy, r),
        "cx": np.array([by_id[a.disk_id].cx for _, a in arcs]),
        "cy": np.array([by_id[a.disk_id].cy for _, a in arcs]),
        "r": np.array([by_id[a.disk_id].radius for _, a in arcs]),
        "start": np.array([a.start_angle for _, a in arcs]),
        "sweep": np.array([a.sweep for _, a in arcs]),
        "cycle": np.array([c for c, _ in arcs], dtype=np.int64),
    }
    areas = tuple(0.5 * sum(_arc_area_term(by_id[a.disk_id], a.start_angle, a.sweep) for a in c.arcs) for c in cycles)
    ub = UnionBoundary(disks, tuple(cycles), tol, areas, (), table)
    enclosure = []
    for c in cycles:
        a = c.arcs[0]
        d = by_id[a.disk_id]
        probe = Point(d.cx + d.radius * math.cos(a.mid_angle), d.cy + d.radius * math.sin(a.mid_angle))
        enclosure.append(frozenset(np.nonzero(ub.crossing_parity(probe, exclude_cycle=c.cycle_id))[0].tolist()))
    object.__setattr__(ub, "cycle_enclosure", tuple(enclosure))
    return ub


@lru_cache(maxsize=8192)
def _cached(disks: tuple[Disk, ...], tol: TolerancePolicy) -> UnionBoundary:
    return _build(disks, tol)


def union_boundary(disks: Iterable[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> UnionBoundary:
    """Boundary of the union of ``disks`` as closed cycles of arcs.

    Arcs are counterclockwise on their own circle, so the union lies to the
    left when a cycle is walked in order.  Results are cached per disk tuple.
    """
    return _cached(tuple(disks), tol)


def _as_boundary(disks, tol: TolerancePolicy) -> UnionBoundary:
    return disks if isinstance(disks, UnionBoundary) else union_boundary(disks, tol)


def enclosure_signature(ub: UnionBoundary, p: Point) -> FaceSignature:
    return ub.signature(p)


def separates(disks: Sequence[Disk] | UnionBoundary, p: Point, q: Point, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when every path from ``p`` to ``q`` meets one of the disks."""
    ub = _as_boundary(disks, tol)
    sp = ub.signature(p)
    if sp.covered:
        return True
    sq = ub.signature(q)
    return sq.covered or sp != sq


def separates_all(disks: Sequence[Disk] | UnionBoundary, points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when every pair of ``points`` is separated."""
    ub = _as_boundary(disks, tol)
    seen = set()
    for p in points:
        sig = ub.signature(p)
        if sig.covered:
            continue
        if sig in seen:
            return False
        seen.add(sig)
    return True


def partition_by_face(disks: Sequence[Disk] | UnionBoundary, points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> list[list[int]]:
    """Group point indices by complement face, in order of first appearance."""
    ub = _as_boundary(disks, tol)
    groups: dict[FaceSignature, list[int]] = {}
    for k, p in enumerate(points):
        sig = ub.signature(p)
        if sig.covered:
            raise DegenerateInput(f"point {k} is covered; faces are only defined for uncovered points")
        groups.setdefault(sig, []).append(k)
    return list(groups.values())


def face_boundary_disks(disks: Sequence[Disk] | UnionBoundary, p: Point, tol: TolerancePolicy = DEFAULT_TOL) -> frozenset[int]:
    """Ids of disks owning an arc on the boundary of the face containing ``p``."""
    ub = _as_boundary(disks, tol)
    sig = ub.signature(p)
    if sig.covered:
        raise DegenerateInput(f"point {tuple(p)} is covered")
    return frozenset(a.disk_id for cid in ub.bounding_cycles(sig) for a in ub.cycles[cid].arcs)


def face_boundary_arcs(ub: UnionBoundary, sig: FaceSignature) -> list[Arc]:
    return [a for cid in ub.bounding_cycles(sig) for a in ub.cycles[cid].arcs]


def complement_face_count(disks: Sequence[Disk] | UnionBoundary, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Outer face plus one bounded face per hole cycle."""
    return 1 + _as_boundary(disks, tol).hole_count()


def arc_point(ub: UnionBoundary, arc: Arc, angle: float | None = None) -> Point:
    d = ub.disk(arc.disk_id)
    a = arc.mid_angle if angle is None else angle
    return Point(d.cx + d.radius * math.cos(a), d.cy + d.radius * math.sin(a))
