"""Points inside disks are handled by covering, the rest by separating."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateInput, Uncoverable
from .geometry import DEFAULT_TOL, Containment, Disk, Point, TolerancePolicy, point_in_disk


@dataclass(frozen=True)
class CoverResult:
    disk_ids: frozenset[int]
    # indices of still-uncovered targets after each greedy round
    trace: tuple[frozenset[int], ...]


def _inside_any(p: Point, disks: Sequence[Disk], tol: TolerancePolicy) -> bool:
    hit = False
    for d in disks:
        state = point_in_disk(p, d, tol)
        if state is Containment.BOUNDARY:
            raise DegenerateInput(f"point {tuple(p)} lies on the circle of disk {d.id}")
        hit = hit or state is Containment.INSIDE
    return hit


def split_covered_indices(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> tuple[list[int], list[int]]:
    covered, free = [], []
    for k, p in enumerate(points):
        (covered if _inside_any(p, disks, tol) else free).append(k)
    return covered, free


def split_covered(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> tuple[list[Point], list[Point]]:
    """Points inside some disk, and the remaining ones."""
    covered, free = split_covered_indices(disks, points, tol)
    return [points[k] for k in covered], [points[k] for k in free]


def greedy_cover(disks: Sequence[Disk], targets: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> CoverResult:
    """Classic greedy set cover: take the disk holding most uncovered targets, smallest id on ties."""
    members = {d.id: {k for k, p in enumerate(targets) if point_in_disk(p, d, tol) is Containment.INSIDE} for d in disks}
    uncovered = set(range(len(targets)))
    orphans = uncovered - set().union(*members.values()) if members else uncovered
    if orphans:
        raise Uncoverable(f"targets {sorted(orphans)} lie in no disk")
    chosen, trace = set(), []
    while uncovered:
        best = max(sorted(members), key=lambda i: len(members[i] & uncovered))
        chosen.add(best)
        uncovered -= members[best]
        trace.append(frozenset(uncovered))
    return CoverResult(frozenset(chosen), tuple(trace))
