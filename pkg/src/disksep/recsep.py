"""Recursive greedy separator for many points, and the top-level solver."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .arrangement import partition_by_face, separates_all, union_boundary
from .errors import InternalError, InvalidInstance
from .geometry import DEFAULT_TOL, Disk, Point, TolerancePolicy
from .reduction import CoverResult, greedy_cover, split_covered_indices
from .two_point import TwoPointResult, two_point_separator


@dataclass(frozen=True)
class TraceStep:
    group: tuple[int, ...]
    pair: tuple[int, int]
    chosen: frozenset[int]
    parts: tuple[tuple[int, ...], ...]
    pi: tuple[Point, ...]
    depth: int


@dataclass(frozen=True)
class SeparatorResult:
    disk_ids: frozenset[int]
    trace: tuple[TraceStep, ...]


def rec_sep(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL, *, index: Sequence[int] | None = None) -> SeparatorResult:
    """Separate ``points`` by repeatedly taking the cheapest two-point separator.

    Every round tries all pairs of the current group against the full disk
    set, keeps the smallest result (earliest pair on ties), splits the group
    by the faces of that result and recurses into each part.  ``index``
    relabels points in the trace.
    """
    disks = list(disks)
    points = list(points)
    labels = list(index) if index is not None else list(range(len(points)))
    ub = union_boundary(disks, tol)
    if any(ub.covered(p) for p in points):
        raise InvalidInstance("rec_sep expects points outside every disk")
    if not separates_all(ub, points, tol):
        raise InvalidInstance("the disks do not separate every pair of points")
    by_id = {d.id: d for d in disks}
    chosen: set[int] = set()
    trace: list[TraceStep] = []

    def recurse(group: list[int], depth: int) -> None:
        if len(group) <= 1:
            return
        best: tuple[tuple[int, int], TwoPointResult] | None = None
        for a, b in combinations(group, 2):
            res = two_point_separator(disks, points[a], points[b], tol)
            if best is None or len(res.disk_ids) < len(best[1].disk_ids):
                best = ((a, b), res)
        pair, res = best
        sub = [by_id[i] for i in sorted(res.disk_ids)]
        parts = [[group[k] for k in part] for part in partition_by_face(sub, [points[i] for i in group], tol)]
        if len(parts) < 2:
            raise InternalError("chosen separator left the group in one face")
        chosen.update(res.disk_ids)
        trace.append(TraceStep(
            tuple(labels[i] for i in group),
            (labels[pair[0]], labels[pair[1]]),
            res.disk_ids,
            tuple(tuple(labels[i] for i in part) for part in parts),
            res.pi.waypoints,
            depth,
        ))
        for part in parts:
            recurse(part, depth + 1)

    recurse(list(range(len(points))), 0)
    return SeparatorResult(frozenset(chosen), tuple(trace))


@dataclass(frozen=True)
class Solution:
    disk_ids: frozenset[int]
    cover: CoverResult
    separation: SeparatorResult
    covered_points: tuple[int, ...]


def solve(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> Solution:
    """Cover the points lying in disks, separate the others, and check the union."""
    disks = list(disks)
    points = list(points)
    if not separates_all(disks, points, tol):
        raise InvalidInstance("the disks do not separate the points")
    covered, free = split_covered_indices(disks, points, tol)
    cover = greedy_cover(disks, [points[k] for k in covered], tol)
    sep = rec_sep(disks, [points[k] for k in free], tol, index=free)
    out = cover.disk_ids | sep.disk_ids
    by_id = {d.id: d for d in disks}
    if not separates_all([by_id[i] for i in sorted(out)], points, tol):
        raise InternalError("combined cover and separator fails to separate the points")
    return Solution(out, cover, sep, tuple(covered))


def separate_points(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> frozenset[int]:
    """Ids of a subset of ``disks`` separating every pair of ``points``."""
    return solve(disks, points, tol).disk_ids
