"""Approximate minimum separator for two points.

Pipeline per connected group of disks: fewest-disk chain ``sigma`` from the
face of ``s`` to the face of ``t``, a polyline ``pi`` running through the
chain, the pieces of all disks once ``pi`` is removed, and the shortest
piece cycle that re-joins the two halves of some chain disk.  The disks on
that cycle separate ``s`` from ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import networkx as nx
import numpy as np

from .arrangement import (
    FaceSignature,
    arc_point,
    face_boundary_arcs,
    separates,
    union_boundary,
)
from .errors import (
    DegenerateInput,
    InternalError,
    InvalidInstance,
    NoPieceCycle,
    NotSeparated,
    PiConstructionFailed,
)
from .geometry import (
    DEFAULT_TOL,
    Disk,
    Point,
    TolerancePolicy,
    circle_circle_intersect,
    segment_disk_interval,
)
from .graphs import (
    SigmaPath,
    augmented_st_graph,
    connected_components,
    intersection_graph,
    shortest_disk_sequence,
    sigma_violations,
)
from .pieces import DiskPiece, cut_pieces_along, piece_graph

PIPELINE_RETRIES = 4


@dataclass(frozen=True)
class PiPath:
    waypoints: tuple[Point, ...]
    sigma: SigmaPath
    source_face: FaceSignature
    target_face: FaceSignature


@dataclass(frozen=True)
class TwoPointResult:
    disk_ids: frozenset[int]
    sigma: SigmaPath
    pi: PiPath
    piece_path: tuple[tuple[int, int], ...]
    component: frozenset[int]


def _longest(arcs):
    return max(arcs, key=lambda a: (a.sweep, -a.start_angle))


def choose_waypoints(sigma: SigmaPath, disks: Sequence[Disk], s: Point, t: Point, tol: TolerancePolicy = DEFAULT_TOL) -> PiPath:
    """Polyline ``s', x_1, ..., t'`` threaded through the chain ``sigma``.

    ``s'`` and ``t'`` are midpoints of the longest arcs that the first and
    last chain disks contribute to the boundaries of the faces of ``s`` and
    ``t``; each ``x_i`` is the center of the lens of consecutive disks.
    """
    if not sigma:
        raise PiConstructionFailed("empty disk sequence")
    ub = union_boundary(disks, tol)
    by_id = {d.id: d for d in disks}
    fs, ft = ub.signature(s), ub.signature(t)
    first = [a for a in face_boundary_arcs(ub, fs) if a.disk_id == sigma[0]]
    last = [a for a in face_boundary_arcs(ub, ft) if a.disk_id == sigma[-1]]
    if not first or not last:
        raise PiConstructionFailed("chain ends do not touch the terminal faces")
    waypoints = [arc_point(ub, _longest(first))]
    for a, b in zip(sigma, sigma[1:]):
        pts = circle_circle_intersect(by_id[a], by_id[b], tol)
        if len(pts) != 2:
            raise PiConstructionFailed(f"consecutive chain disks {a}, {b} do not cross")
        waypoints.append(Point((pts[0].x + pts[1].x) / 2, (pts[0].y + pts[1].y) / 2))
    waypoints.append(arc_point(ub, _longest(last)))
    pi = PiPath(tuple(waypoints), tuple(sigma), fs, ft)
    check_pi(pi, disks, tol)
    return pi


def check_pi(pi: PiPath, disks: Sequence[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> None:
    """Raise unless the chain is covered by sigma and meets each sigma disk in one stretch."""
    by_id = {d.id: d for d in disks}
    wp, sigma = pi.waypoints, pi.sigma
    if len(wp) != len(sigma) + 1:
        raise PiConstructionFailed("waypoint count does not match the chain")
    for k, did in enumerate(sigma):
        d = by_id[did]
        for p in (wp[k], wp[k + 1]):
            if math.hypot(p.x - d.cx, p.y - d.cy) > d.radius + tol.eps:
                raise PiConstructionFailed(f"segment {k} leaves chain disk {did}")
    for did in sigma:
        d = by_id[did]
        spans = []
        for k, (a, b) in enumerate(zip(wp, wp[1:])):
            iv = segment_disk_interval(a, b, d)
            if iv is not None and iv[1] - iv[0] > 0:
                spans.append((k + iv[0], k + iv[1]))
        merged = []
        for lo, hi in spans:
            if merged and lo - merged[-1][1] <= 1e-9:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        if len(merged) != 1:
            raise PiConstructionFailed(f"chain meets disk {did} in {len(merged)} stretches")


def cut_into_pieces(disks: Sequence[Disk], pi: PiPath, tol: TolerancePolicy = DEFAULT_TOL) -> list[DiskPiece]:
    """Pieces of every disk after removing the waypoint chain of ``pi``.

    The stretches of ``pi`` inside the terminal faces touch no disk and are
    not materialised.
    """
    pieces = cut_pieces_along(disks, pi.waypoints, tol)
    counts: dict[int, int] = {}
    for p in pieces:
        counts[p.disk_id] = counts.get(p.disk_id, 0) + 1
    for did in pi.sigma:
        if counts.get(did) != 2:
            raise PiConstructionFailed(f"chain disk {did} split into {counts.get(did)} pieces")
    return pieces


def _lex_shortest(h: nx.Graph, a, b) -> list | None:
    dist = nx.single_source_shortest_path_length(h, b)
    if a not in dist:
        return None
    path = [a]
    cur = a
    while cur != b:
        cur = min(v for v in h.neighbors(cur) if dist.get(v) == dist[cur] - 1)
        path.append(cur)
    return path


def best_piece_cycle(h: nx.Graph, sigma: SigmaPath) -> tuple[frozenset[int], tuple[tuple[int, int], ...]]:
    """Shortest piece path joining the two pieces of some chain disk.

    Returns the disks owning the pieces on the path and the path itself.
    Length counts pieces, endpoints included; ties go to the smaller chain
    disk id and then to the smaller piece sequence.
    """
    best = None
    for did in sorted(set(sigma)):
        ends = sorted(k for k in h.nodes if k[0] == did)
        if len(ends) != 2:
            raise NoPieceCycle(f"chain disk {did} has {len(ends)} pieces in H")
        path = _lex_shortest(h, ends[0], ends[1])
        if path is None:
            continue
        cand = (len(path), did, tuple(path))
        if best is None or cand < best:
            best = cand
    if best is None:
        raise NoPieceCycle("no chain disk has its two pieces connected in H")
    path = best[2]
    return frozenset(k[0] for k in path), path


def _jittered(disks: Sequence[Disk], amount: float, seed: int) -> list[Disk]:
    rng = np.random.default_rng(seed)
    out = []
    for d in disks:
        dx, dy = rng.uniform(-amount, amount, 2)
        out.append(replace(d, center=Point(d.cx + dx, d.cy + dy)))
    return out


def _run_component(disks: list[Disk], s: Point, t: Point, tol: TolerancePolicy) -> TwoPointResult:
    last: Exception | None = None
    for attempt in range(PIPELINE_RETRIES):
        work = disks if attempt == 0 else _jittered(disks, tol.min_feature, attempt)
        try:
            ag = augmented_st_graph(work, s, t, tol)
            sigma = shortest_disk_sequence(ag)
            if sigma_violations(sigma, work, tol):
                raise InternalError(f"sigma {sigma} has overlapping non-consecutive disks")
            pi = choose_waypoints(sigma, work, s, t, tol)
            pieces = cut_into_pieces(work, pi, tol)
            chosen, path = best_piece_cycle(piece_graph(pieces, tol), sigma)
        except (DegenerateInput, PiConstructionFailed, NotSeparated) as exc:
            last = exc
            continue
        by_id = {d.id: d for d in disks}
        if not separates([by_id[i] for i in sorted(chosen)], s, t, tol):
            raise InternalError(f"piece cycle {sorted(chosen)} does not separate the terminals")
        return TwoPointResult(chosen, sigma, pi, path, frozenset(d.id for d in disks))
    raise InternalError(f"two-point pipeline kept hitting degeneracies: {last}")


def two_point_separator(disks: Sequence[Disk], s: Point, t: Point, tol: TolerancePolicy = DEFAULT_TOL) -> TwoPointResult:
    """Run the pipeline on every connected group that separates ``s`` and ``t``; keep the smallest."""
    disks = list(disks)
    ub = union_boundary(disks, tol)
    if ub.covered(s) or ub.covered(t):
        raise InvalidInstance("a terminal lies inside a disk")
    if not separates(ub, s, t):
        raise NotSeparated("the disks do not separate s and t")
    best = None
    for comp in connected_components(intersection_graph(disks, tol)):
        group = [d for d in disks if d.id in comp]
        if not separates(group, s, t, tol):
            continue
        res = _run_component(group, s, t, tol)
        key = (len(res.disk_ids), min(comp))
        if best is None or key < best[0]:
            best = (key, res)
    if best is None:
        raise InternalError("the disks separate s and t but no connected group does")
    return best[1]


def separate_two_points(disks: Sequence[Disk], s: Point, t: Point, tol: TolerancePolicy = DEFAULT_TOL) -> frozenset[int]:
    """Ids of a subset of ``disks`` separating ``s`` from ``t``."""
    return two_point_separator(disks, s, t, tol).disk_ids
