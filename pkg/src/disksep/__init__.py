"""Separating points in the plane with a small subset of unit disks."""

from .arrangement import FaceSignature, UnionBoundary, complement_face_count, separates, separates_all, union_boundary
from .errors import DisksepError
from .geometry import DEFAULT_TOL, Disk, Point, TolerancePolicy, make_disk, perturb_to_general_position
from .instance_io import Instance, generate_random_instance, load_instance, parse_instance, render_svg, save_instance, write_instance
from .oracle import exact_min_separator, exact_min_two_point, grid_flood_separates
from .recsep import rec_sep, separate_points, solve
from .two_point import separate_two_points, two_point_separator

__all__ = [
    "DEFAULT_TOL",
    "Disk",
    "DisksepError",
    "FaceSignature",
    "Instance",
    "Point",
    "TolerancePolicy",
    "UnionBoundary",
    "complement_face_count",
    "exact_min_separator",
    "exact_min_two_point",
    "generate_random_instance",
    "grid_flood_separates",
    "load_instance",
    "make_disk",
    "parse_instance",
    "perturb_to_general_position",
    "rec_sep",
    "render_svg",
    "save_instance",
    "separate_points",
    "separate_two_points",
    "separates",
    "separates_all",
    "solve",
    "two_point_separator",
    "union_boundary",
    "write_instance",
]
