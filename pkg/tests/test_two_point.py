import math

import networkx as nx
import numpy as np
import pytest
from scipy import ndimage

from canonical import FAR, RING_CENTROID, ring, ring_of_4
from disksep.arrangement import separates, union_boundary
from disksep.errors import InvalidInstance, NotSeparated
from disksep.geometry import Point, make_disk
from disksep.oracle import exact_min_two_point, grid_flood_separates
from disksep.pieces import cut_pieces_along, piece_graph
from disksep.two_point import (
    PiPath,
    best_piece_cycle,
    check_pi,
    choose_waypoints,
    cut_into_pieces,
    separate_two_points,
    two_point_separator,
)


def raster_pieces(disks, chain, res=0.01):
    """Piece labels per disk and piece adjacencies, from a raster of disk minus a thin band around the chain."""
    xs = np.arange(-3, 4, res) + res / 2
    gx, gy = np.meshgrid(xs, xs)
    band = np.zeros_like(gx, dtype=bool)
    for (ax, ay), (bx, by) in zip(chain, chain[1:]):
        dx, dy = bx - ax, by - ay
        t = np.clip(((gx - ax) * dx + (gy - ay) * dy) / (dx * dx + dy * dy), 0, 1)
        band |= np.hypot(gx - ax - t * dx, gy - ay - t * dy) < res
    labels = {}
    for d in disks:
        lab, count = ndimage.label((np.hypot(gx - d.cx, gy - d.cy) < d.radius) & ~band)
        labels[d.id] = (lab, count)
    edges = set()
    ids = sorted(labels)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            la, lb = labels[a][0], labels[b][0]
            both = (la > 0) & (lb > 0)
            edges |= {((a, int(u)), (b, int(v))) for u, v in zip(la[both], lb[both])}
    return {k: c for k, (_, c) in labels.items()}, edges


def pieces_per_disk(pieces):
    out = {}
    for p in pieces:
        out[p.disk_id] = out.get(p.disk_id, 0) + 1
    return out


# -- waypoints ---------------------------------------------------------------------


def test_single_disk_chain_is_a_chord():
    pi = choose_waypoints((0,), ring(), RING_CENTROID, FAR)
    assert len(pi.waypoints) == 2
    for p in pi.waypoints:
        assert abs(math.hypot(p.x, p.y) - 1) < 1e-9


def test_ring_waypoints_sit_on_hole_and_outer_arcs():
    ub = union_boundary(ring())
    pi = choose_waypoints((0,), ring(), RING_CENTROID, FAR)
    s_prime, t_prime = pi.waypoints
    # s' lies on the hole boundary, so it is closer to the centroid than t'
    assert math.dist(s_prime, RING_CENTROID) < math.dist(t_prime, RING_CENTROID)
    hole = next(c for c in ub.cycles if ub.is_hole(c.cycle_id))
    assert any(a.disk_id == 0 for a in hole.arcs)


def test_lens_center_waypoint():
    disks = [make_disk(0, 0, 0), make_disk(1, 1, 0)]
    pi = PiPath((Point(-1, 0), Point(0.5, 0), Point(2, 0)), (0, 1), None, None)
    check_pi(pi, disks)
    assert pi.waypoints[1] == Point(0.5, 0)


# -- pieces ------------------------------------------------------------------------


def test_untouched_disk_is_whole():
    disks = [make_disk(0, 0, 0), make_disk(1, 5, 5)]
    pieces = cut_pieces_along(disks, [Point(-1, 0), Point(1, 0)])
    by = {p.disk_id: p for p in pieces if p.disk_id == 1}
    assert by[1].whole
    assert pieces_per_disk(pieces) == {0: 2, 1: 1}


def test_disk_cut_twice_gives_three_pieces():
    disk = [make_disk(0, 0, 0)]
    chain = [Point(-2, 0.5), Point(2, 0.5), Point(2, -0.5), Point(-2, -0.5)]
    assert pieces_per_disk(cut_pieces_along(disk, chain)) == {0: 3}
    counts, _ = raster_pieces(disk, chain)
    assert counts == {0: 3}


def test_piece_graph_disjoint_and_lens():
    far = [make_disk(0, 0, 0), make_disk(1, 5, 0)]
    assert piece_graph(cut_pieces_along(far, [])).number_of_edges() == 0
    pair = [make_disk(0, 0, 0), make_disk(1, 1, 0)]
    h = piece_graph(cut_pieces_along(pair, [Point(-0.5, 3), Point(-0.5, 2.5)]))
    assert h.number_of_edges() == 1


def test_lens_split_lengthwise_gives_two_edges():
    pair = [make_disk(0, 0, 0), make_disk(1, 1, 0)]
    chain = [Point(0.55, -2), Point(0.55, 2)]
    h = piece_graph(cut_pieces_along(pair, chain))
    assert h.number_of_nodes() == 4 and h.number_of_edges() == 2
    counts, edges = raster_pieces(pair, chain)
    assert counts == {0: 2, 1: 2} and len(edges) == 2


def test_piece_graph_matches_raster_on_ring():
    pi = choose_waypoints((0,), ring(), RING_CENTROID, FAR)
    pieces = cut_into_pieces(ring(), pi)
    h = piece_graph(pieces)
    counts, edges = raster_pieces(ring(), pi.waypoints)
    assert pieces_per_disk(pieces) == counts
    assert h.number_of_edges() == len(edges)


def test_piece_count_conservation():
    disks = ring() + [make_disk(9, 6, 6)]
    pi = choose_waypoints((0,), disks, RING_CENTROID, FAR)
    pieces = cut_into_pieces(disks, pi)
    h = piece_graph(pieces)
    assert h.number_of_nodes() == len(pieces)
    assert pieces_per_disk(pieces)[0] == 2


# -- piece cycles --------------------------------------------------------------------


def test_ring_cycle_uses_all_three_disks():
    pi = choose_waypoints((0,), ring(), RING_CENTROID, FAR)
    chosen, path = best_piece_cycle(piece_graph(cut_into_pieces(ring(), pi)), (0,))
    assert chosen == {0, 1, 2}
    assert path[0][0] == 0 and path[-1][0] == 0


def test_one_intermediate_piece_joins_the_halves():
    # a chord splits disk 0; disk 1 covers the chord's far end and reconnects the halves
    disks = [make_disk(0, 0, 0), make_disk(1, 0, 1.5)]
    h = piece_graph(cut_pieces_along(disks, [Point(0, -2), Point(0, 2)]))
    chosen, path = best_piece_cycle(h, (0,))
    assert len(path) == 3 and chosen == {0, 1}


def test_ring_of_4_needs_four():
    assert separate_two_points(ring_of_4(), Point(0, 0), Point(9, 9)) == {0, 1, 2, 3}
    assert exact_min_two_point(ring_of_4(), Point(0, 0), Point(9, 9)) == {0, 1, 2, 3}


# -- whole pipeline -----------------------------------------------------------------


def test_decoys_are_ignored():
    decoys = [make_disk(10 + i, 20 + 3 * i, -10) for i in range(5)]
    res = two_point_separator(ring() + decoys, RING_CENTROID, Point(9, 9))
    assert res.disk_ids == {0, 1, 2}
    assert exact_min_two_point(ring() + decoys, RING_CENTROID, Point(9, 9)) == {0, 1, 2}


def test_single_disk_not_separated():
    with pytest.raises(NotSeparated):
        separate_two_points([make_disk(0, 0, 0)], Point(-3, 0), Point(3, 0))


def test_covered_terminal_rejected():
    with pytest.raises(InvalidInstance):
        separate_two_points(ring(), Point(0, 0), FAR)


def test_output_separates_on_both_verifiers():
    disks = ring() + ring(2.7, 0.0, first_id=3)
    s, t = RING_CENTROID, Point(3.6, 0.5196152)
    res = two_point_separator(disks, s, t)
    chosen = [d for d in disks if d.id in res.disk_ids]
    assert separates(chosen, s, t) and grid_flood_separates(chosen, s, t)
    assert len(res.disk_ids) >= len(exact_min_two_point(disks, s, t))
    assert len(res.disk_ids) <= len(disks)


def test_result_is_deterministic():
    disks = ring() + ring(2.7, 0.0, first_id=3)
    a = two_point_separator(disks, RING_CENTROID, FAR)
    b = two_point_separator(list(reversed(disks)), RING_CENTROID, FAR)
    assert a.disk_ids == b.disk_ids and a.sigma == b.sigma


def test_piece_graph_is_simple_graph():
    pi = choose_waypoints((0,), ring(), RING_CENTROID, FAR)
    h = piece_graph(cut_into_pieces(ring(), pi))
    assert isinstance(h, nx.Graph) and nx.number_of_selfloops(h) == 0
