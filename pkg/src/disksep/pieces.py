"""Cutting disks along a polyline and the intersection graph of the pieces.

The plane is cut into vertical slabs at every x where something happens
(curve endpoints, circle extremes, crossings).  Inside a slab no two curves
meet, so the cells between consecutive curves are the faces of a vertical
decomposition of the arrangement formed by the circles and the polyline.
Each cell lies entirely inside or outside every disk.  A disk piece is a
connected union of cells of one disk where moving between cells never
crosses the polyline; two pieces of different disks meet when they share a
cell.

Only disks the polyline touches, plus their overlapping neighbours, enter
the decomposition.  Every other disk stays whole.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import DegenerateInput
from .geometry import (
    DEFAULT_TOL,
    Disk,
    Point,
    TolerancePolicy,
    circle_circle_intersect,
    overlap_matrix,
    point_segment_distance,
    segment_disk_distance,
)

LOWER, UPPER, SEGMENT = 0, 1, 2
# rotations tried in turn; a vertical segment or a tie in a slab forces the next one
ROTATIONS = (0.3183098861837907, 1.2247448713915890, 2.2360679774997896, 0.5772156649015329, 2.7182818284590452)
X_CLUSTER = 1e-9
Y_TOL = 1e-9


@dataclass(frozen=True)
class DiskPiece:
    disk: Disk
    piece_id: int
    cells: frozenset[int]
    representative: Point
    whole: bool

    @property
    def disk_id(self) -> int:
        return self.disk.id

    @property
    def key(self) -> tuple[int, int]:
        return (self.disk.id, self.piece_id)


class _Curve:
    __slots__ = ("kind", "owner", "x0", "x1", "a", "b", "c", "d")

    def __init__(self, kind, owner, x0, x1, a, b, c, d=0.0):
        self.kind, self.owner, self.x0, self.x1 = kind, owner, x0, x1
        self.a, self.b, self.c, self.d = a, b, c, d

    def y(self, x: float) -> float:
        x = min(max(x, self.x0), self.x1)
        if self.kind == SEGMENT:
            # a, b: left endpoint; c: slope
            return self.b + (x - self.a) * self.c
        dx = x - self.a
        h = math.sqrt(max(self.c * self.c - dx * dx, 0.0))
        return self.b + h if self.kind == UPPER else self.b - h


def _rot(p, cs, sn) -> tuple[float, float]:
    return (p[0] * cs - p[1] * sn, p[0] * sn + p[1] * cs)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class SlabDecomposition:
    """Vertical decomposition of circles and segments, in a rotated frame.

    ``cells[c]`` is ``(slab, gap)``; ``cell_disks[c]`` holds local indices of
    the disks containing cell ``c``.
    """

    def __init__(self, disks: Sequence[Disk], segments: Sequence[tuple[Point, Point]], angle: float, tol: TolerancePolicy = DEFAULT_TOL):
        self.disks = list(disks)
        self.angle = angle
        cs, sn = math.cos(angle), math.sin(angle)
        self._cs, self._sn = cs, sn
        curves: list[_Curve] = []
        rdisks = []
        for k, d in enumerate(self.disks):
            cx, cy = _rot(d.center, cs, sn)
            rdisks.append(Disk(k, Point(cx, cy), d.radius))
            curves.append(_Curve(LOWER, k, cx - d.radius, cx + d.radius, cx, cy, d.radius))
            curves.append(_Curve(UPPER, k, cx - d.radius, cx + d.radius, cx, cy, d.radius))
        rsegs = []
        for k, (a, b) in enumerate(segments):
            ra, rb = _rot(a, cs, sn), _rot(b, cs, sn)
            if ra[0] > rb[0]:
                ra, rb = rb, ra
            if rb[0] - ra[0] < 1e3 * X_CLUSTER:
                raise DegenerateInput("segment nearly vertical in this frame")
            rsegs.append((ra, rb))
            curves.append(_Curve(SEGMENT, k, ra[0], rb[0], ra[0], ra[1], (rb[1] - ra[1]) / (rb[0] - ra[0])))
        self.curves = curves

        xs = [c.x0 for c in curves] + [c.x1 for c in curves]
        xs += self._crossing_xs(rdisks, rsegs, tol)
        xs.sort()
        events: list[float] = []
        for x in xs:
            if not events or x - events[-1] > X_CLUSTER:
                events.append(x)
        self.events = events
        self._build_cells()

    # -- construction ------------------------------------------------------

    @staticmethod
    def _crossing_xs(rdisks, rsegs, tol) -> list[float]:
        xs = []
        verts = []
        n = len(rdisks)
        for i in range(n):
            for j in range(i + 1, n):
                for p in circle_circle_intersect(rdisks[i], rdisks[j], tol):
                    xs.append(p.x)
                    verts.append(p)
        for (ax, ay), (bx, by) in rsegs:
            vx, vy = bx - ax, by - ay
            qa = vx * vx + vy * vy
            for d in rdisks:
                px, py = ax - d.cx, ay - d.cy
                qb = 2 * (px * vx + py * vy)
                qc = px * px + py * py - d.radius * d.radius
                disc = qb * qb - 4 * qa * qc
                if disc <= 0:
                    if disc > -tol.eps * qa and abs(qc) > tol.eps:
                        raise DegenerateInput("segment tangent to a circle")
                    continue
                sq = math.sqrt(disc)
                for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
                    if -1e-12 <= t <= 1 + 1e-12:
                        xs.append(ax + t * vx)
            for v in verts:
                if point_segment_distance(v, (ax, ay), (bx, by)) <= tol.eps:
                    raise DegenerateInput("segment passes through a circle-circle vertex")
        for i in range(len(rsegs)):
            (ax, ay), (bx, by) = rsegs[i]
            for j in range(i + 1, len(rsegs)):
                (cx, cy), (dx, dy) = rsegs[j]
                den = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
                if den == 0:
                    continue
                t = ((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx)) / den
                u = ((cx - ax) * (by - ay) - (cy - ay) * (bx - ax)) / den
                if 0 <= t <= 1 and 0 <= u <= 1:
                    xs.append(ax + t * (bx - ax))
        return xs

    def _active(self, xa: float, xb: float) -> list[_Curve]:
        return [c for c in self.curves if c.x0 <= xa + X_CLUSTER and c.x1 >= xb]

    def _build_cells(self):
        ev = self.events
        self.slab_curves: list[list[_Curve]] = []
        self.slab_cells: list[list[int]] = []
        self.cells: list[tuple[int, int]] = []
        self.cell_disks: list[frozenset[int]] = []
        self.cell_sample: list[tuple[float, float]] = []
        self.cell_height: list[float] = []
        self.cell_below: list[_Curve | None] = []
        for k in range(len(ev) - 1):
            xa, xb = ev[k], ev[k + 1]
            xm = 0.5 * (xa + xb)
            act = self._active(xa, xb)
            ys = [c.y(xm) for c in act]
            order = sorted(range(len(act)), key=ys.__getitem__)
            act = [act[i] for i in order]
            ys = [ys[i] for i in order]
            for g in range(1, len(ys)):
                if not ys[g] > ys[g - 1]:
                    raise DegenerateInput("two curves tie inside a slab")
            self.slab_curves.append(act)
            inside: set[int] = set()
            cells = []
            for g in range(len(act) + 1):
                if g > 0:
                    c = act[g - 1]
                    if c.kind == LOWER:
                        inside.add(c.owner)
                    elif c.kind == UPPER:
                        inside.discard(c.owner)
                cid = len(self.cells)
                self.cells.append((k, g))
                self.cell_disks.append(frozenset(inside))
                lo = ys[g - 1] if g > 0 else None
                hi = ys[g] if g < len(ys) else None
                if lo is not None and hi is not None:
                    self.cell_sample.append((xm, 0.5 * (lo + hi)))
                    self.cell_height.append(hi - lo)
                else:
                    self.cell_sample.append((xm, math.nan))
                    self.cell_height.append(math.inf)
                self.cell_below.append(act[g - 1] if g > 0 else None)
                cells.append(cid)
            self.slab_cells.append(cells)

    # -- adjacency ---------------------------------------------------------

    def vertical_adjacencies(self) -> Iterable[tuple[int, int]]:
        """Cell pairs that share an open stretch of a slab boundary."""
        ev = self.events
        for k in range(len(self.slab_curves) - 1):
            x = ev[k + 1]
            left = [c.y(x) for c in self.slab_curves[k]]
            right = [c.y(x) for c in self.slab_curves[k + 1]]
            lb = [-math.inf] + left + [math.inf]
            rb = [-math.inf] + right + [math.inf]
            i = j = 0
            while i < len(lb) - 1 and j < len(rb) - 1:
                lo = max(lb[i], rb[j])
                hi = min(lb[i + 1], rb[j + 1])
                if hi - lo > Y_TOL:
                    yield self.slab_cells[k][i], self.slab_cells[k + 1][j]
                if lb[i + 1] < rb[j + 1]:
                    i += 1
                else:
                    j += 1

    def crossing_adjacencies(self) -> Iterable[tuple[int, int, _Curve]]:
        """Vertically stacked cell pairs in one slab, with the curve between them."""
        for k, act in enumerate(self.slab_curves):
            cells = self.slab_cells[k]
            for g, c in enumerate(act):
                yield cells[g], cells[g + 1], c

    # -- queries -------------------------------------------------------------

    def sample_point(self, cell: int) -> Point:
        x, y = self.cell_sample[cell]
        cs, sn = self._cs, self._sn
        return Point(x * cs + y * sn, -x * sn + y * cs)

    def locate(self, p: Point) -> int | None:
        """Cell containing ``p``; None outside the event range."""
        x, y = _rot(p, self._cs, self._sn)
        k = bisect.bisect_right(self.events, x) - 1
        if k < 0 or k >= len(self.slab_curves):
            return None
        g = sum(1 for c in self.slab_curves[k] if c.y(x) < y)
        return self.slab_cells[k][g]


def touched_disks(disks: Sequence[Disk], chain: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> list[int]:
    """Indices of disks whose interior the polyline enters."""
    out = []
    for i, d in enumerate(disks):
        best = min(segment_disk_distance(a, b, d) for a, b in zip(chain, chain[1:]))
        if abs(best - d.radius) <= tol.eps:
            raise DegenerateInput(f"polyline grazes the circle of disk {d.id}")
        if best < d.radius:
            out.append(i)
    return out


def _decompose(disks, segments, tol) -> SlabDecomposition:
    last = None
    for angle in ROTATIONS:
        try:
            return SlabDecomposition(disks, segments, angle, tol)
        except DegenerateInput as exc:
            last = exc
    raise DegenerateInput(f"no rotation gave a clean decomposition: {last}")


def cut_pieces_along(disks: Sequence[Disk], chain: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> list[DiskPiece]:
    """Pieces of every disk once the polyline ``chain`` is removed."""
    disks = list(disks)
    chain = [Point(*p) for p in chain]
    if len(chain) < 2:
        return [DiskPiece(d, 0, frozenset(), d.center, True) for d in disks]
    touched = touched_disks(disks, chain, tol)
    if not touched:
        return [DiskPiece(d, 0, frozenset(), d.center, True) for d in disks]
    ov = overlap_matrix(disks, tol)
    local_idx = sorted(set(touched) | set(np.nonzero(ov[touched].any(axis=0))[0].tolist()))
    local = [disks[i] for i in local_idx]
    touched_local = {local_idx.index(i) for i in touched}
    segments = list(zip(chain, chain[1:]))
    dec = _decompose(local, segments, tol)

    uf = _UnionFind()
    for cid, inside in enumerate(dec.cell_disks):
        for d in inside & touched_local:
            uf.add((cid, d))
    for a, b, curve in dec.crossing_adjacencies():
        if curve.kind == SEGMENT:
            continue
        for d in dec.cell_disks[a] & dec.cell_disks[b] & touched_local:
            uf.union((a, d), (b, d))
    for a, b in dec.vertical_adjacencies():
        for d in dec.cell_disks[a] & dec.cell_disks[b] & touched_local:
            uf.union((a, d), (b, d))

    groups: dict[tuple[int, int], list[int]] = {}
    for (cid, d) in list(uf.parent):
        groups.setdefault(uf.find((cid, d)), []).append(cid)
    per_disk: dict[int, list[list[int]]] = {}
    for (_, d), cells in groups.items():
        per_disk.setdefault(d, []).append(sorted(cells))

    all_cells: dict[int, list[int]] = {}
    for cid, inside in enumerate(dec.cell_disks):
        for d in inside:
            all_cells.setdefault(d, []).append(cid)

    pieces: list[DiskPiece] = []
    for i, disk in enumerate(disks):
        if i not in local_idx:
            pieces.append(DiskPiece(disk, 0, frozenset(), disk.center, True))
            continue
        li = local_idx.index(i)
        if li not in touched_local:
            pieces.append(DiskPiece(disk, 0, frozenset(all_cells.get(li, ())), disk.center, True))
            continue
        comps = per_disk.get(li, [])
        comps.sort(key=lambda cells: cells[0])
        for pid, cells in enumerate(comps):
            rep_cell = max(cells, key=lambda c: (dec.cell_height[c], -c))
            pieces.append(DiskPiece(disk, pid, frozenset(cells), dec.sample_point(rep_cell), False))
    return pieces


def piece_graph(pieces: Sequence[DiskPiece], tol: TolerancePolicy = DEFAULT_TOL) -> nx.Graph:
    """Intersection graph H of disk pieces, one unit-cost vertex per piece."""
    h = nx.Graph()
    for p in pieces:
        h.add_node(p.key, piece=p, cost=1)
    by_cell: dict[int, list[DiskPiece]] = {}
    for p in pieces:
        for c in p.cells:
            by_cell.setdefault(c, []).append(p)
    for members in by_cell.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if members[i].disk_id != members[j].disk_id:
                    h.add_edge(members[i].key, members[j].key)
    whole = [p for p in pieces if p.whole]
    if len(whole) > 1:
        ov = overlap_matrix([p.disk for p in whole], tol)
        ii, jj = np.nonzero(np.triu(ov, 1))
        h.add_edges_from((whole[i].key, whole[j].key) for i, j in zip(ii.tolist(), jj.tolist()))
    return h
