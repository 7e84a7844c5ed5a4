"""Hand-built instances shared by the unit and acceptance tests."""

import math

import numpy as np

from disksep.geometry import Point, make_disk, perturb_to_general_position

RING_CENTROID = Point(0.9, 0.5196152)
FAR = Point(5.0, 5.0)


def ring(dx=0.0, dy=0.0, first_id=0):
    """Three unit disks on an equilateral triangle of side 1.8, leaving a hole."""
    centers = [(0.0, 0.0), (1.8, 0.0), (0.9, 1.5588457)]
    return [make_disk(first_id + i, x + dx, y + dy) for i, (x, y) in enumerate(centers)]


def ring_of_4():
    return [make_disk(i, x, y) for i, (x, y) in enumerate([(1.2, 0), (0, 1.2), (-1.2, 0), (0, -1.2)])]


def two_rings():
    """The ring and a copy translated by (10, 0); returns disks and both hole points."""
    disks = ring() + ring(10.0, 0.0, first_id=3)
    return disks, [RING_CENTROID, Point(RING_CENTROID.x + 10, RING_CENTROID.y)]


def double_ring(outer=10):
    """Ring of 3 around the origin inside a ring of ``outer`` disks of radius 3.

    Inner disk 0 and outer disk 3 sit on the same ray, so they overlap.
    """
    inner = [make_disk(i, 1.04 * math.cos(2 * math.pi * i / 3), 1.04 * math.sin(2 * math.pi * i / 3)) for i in range(3)]
    outer_disks = [
        make_disk(3 + j, 3 * math.cos(2 * math.pi * j / outer), 3 * math.sin(2 * math.pi * j / outer)) for j in range(outer)
    ]
    disks, _ = perturb_to_general_position(inner + outer_disks, [])
    return disks, Point(0.0, 0.0), Point(9.0, 9.0)


def lattice(rows, cols, spacing=1.6, jitter=0.1, seed=0):
    """Unit disks on a jittered square grid; each grid cell is a hole.

    Returns the disks and the list of hole centers, row by row.
    """
    rng = np.random.default_rng(seed)
    disks = [
        make_disk(i * cols + j, spacing * j + rng.uniform(-jitter, jitter), spacing * i + rng.uniform(-jitter, jitter))
        for i in range(rows)
        for j in range(cols)
    ]
    holes = [Point(spacing * (j + 0.5), spacing * (i + 0.5)) for i in range(rows - 1) for j in range(cols - 1)]
    return disks, holes
