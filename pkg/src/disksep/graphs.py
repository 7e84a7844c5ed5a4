"""Disk intersection graphs and the terminal-augmented graph for sigma."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .arrangement import face_boundary_disks, separates, union_boundary
from .errors import NoPath, NotSeparated
from .geometry import DEFAULT_TOL, Disk, Point, TolerancePolicy, overlap_matrix

S_NODE = "s"
T_NODE = "t"

SigmaPath = tuple[int, ...]


def intersection_graph(disks: Sequence[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> nx.Graph:
    """Graph on disk ids with an edge for every overlapping pair."""
    g = nx.Graph()
    for d in disks:
        g.add_node(d.id, disk=d)
    if len(disks) > 1:
        ii, jj = np.nonzero(np.triu(overlap_matrix(disks, tol), 1))
        g.add_edges_from((disks[i].id, disks[j].id) for i, j in zip(ii.tolist(), jj.tolist()))
    return g


def connected_components(g: nx.Graph) -> list[set[int]]:
    """Components ordered by their smallest disk id."""
    return sorted((set(c) for c in nx.connected_components(g)), key=min)


@dataclass(frozen=True, eq=False)
class AugmentedSTGraph:
    graph: nx.Graph
    s: Point
    t: Point

    @property
    def s_neighbors(self) -> frozenset[int]:
        return frozenset(self.graph.neighbors(S_NODE))

    @property
    def t_neighbors(self) -> frozenset[int]:
        return frozenset(self.graph.neighbors(T_NODE))


def augmented_st_graph(disks: Sequence[Disk], s: Point, t: Point, tol: TolerancePolicy = DEFAULT_TOL) -> AugmentedSTGraph:
    """Intersection graph plus terminals wired to the disks bounding their faces.

    Terminals cost nothing and every disk costs one, so a path's length is
    the number of disks on it.
    """
    ub = union_boundary(disks, tol)
    if not separates(ub, s, t):
        raise NotSeparated("the disks do not separate s and t")
    g = intersection_graph(disks, tol)
    g.add_node(S_NODE, cost=0)
    g.add_node(T_NODE, cost=0)
    g.add_edges_from((S_NODE, d) for d in face_boundary_disks(ub, s))
    g.add_edges_from((T_NODE, d) for d in face_boundary_disks(ub, t))
    return AugmentedSTGraph(g, s, t)


def shortest_disk_sequence(ag: AugmentedSTGraph) -> SigmaPath:
    """Fewest-disk s-t path; ties go to the lexicographically smallest id sequence."""
    g = ag.graph
    dist = nx.single_source_shortest_path_length(g, T_NODE)
    if S_NODE not in dist:
        raise NoPath("terminals are disconnected")
    seq = []
    cur = S_NODE
    while True:
        want = dist[cur] - 1
        if want == 0:
            break
        cur = min(v for v in g.neighbors(cur) if v not in (S_NODE, T_NODE) and dist.get(v) == want)
        seq.append(cur)
    return tuple(seq)


def sigma_violations(sigma: SigmaPath, disks: Sequence[Disk], tol: TolerancePolicy = DEFAULT_TOL) -> list[tuple[int, int]]:
    """Pairs breaking the sigma shape: consecutive disks must overlap, others must not."""
    by_id = {d.id: d for d in disks}
    seq = [by_id[i] for i in sigma]
    bad = []
    if not seq:
        return bad
    m = overlap_matrix(seq, tol)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if m[i, j] != (j == i + 1):
                bad.append((sigma[i], sigma[j]))
    return bad
