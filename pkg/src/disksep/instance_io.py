"""Instance files, random instances and SVG pictures."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .arrangement import complement_face_count, separates_all, union_boundary
from .errors import GenerationFailed, InvalidInstance, ParseError, PerturbationFailed
from .geometry import (
    DEFAULT_TOL,
    Disk,
    Point,
    TolerancePolicy,
    general_position_violations,
    make_disk,
    perturb_to_general_position,
)


@dataclass(frozen=True)
class Instance:
    disks: tuple[Disk, ...]
    points: tuple[Point, ...]
    seed: int = 0
    tolerance: TolerancePolicy = DEFAULT_TOL
    issues: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ExperimentRecord:
    instance: str
    n: int
    k: int
    alg_size: int
    opt_size: int | None
    ms: float

    @property
    def ratio(self) -> float | None:
        return None if not self.opt_size else self.alg_size / self.opt_size

    CSV_HEADER = "instance,n,k,alg_size,opt_size,ratio,ms"

    def csv_row(self) -> str:
        opt = "" if self.opt_size is None else str(self.opt_size)
        ratio = "" if self.ratio is None else f"{self.ratio:.6f}"
        return f"{self.instance},{self.n},{self.k},{self.alg_size},{opt},{ratio},{self.ms:.3f}"


# -- files -------------------------------------------------------------------


def validation_issues(disks: Sequence[Disk], points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> list[str]:
    issues = []
    bad_d, bad_p = general_position_violations(disks, points, tol)
    if bad_d:
        issues.append(f"disks not in general position: {sorted(disks[i].id for i in bad_d)}")
    if bad_p:
        issues.append(f"points too close to a circle: {sorted(bad_p)}")
    if not issues and not separates_all(disks, points, tol):
        issues.append("the disks do not separate the points")
    return issues


def write_instance(inst: Instance) -> str:
    doc = {
        "disks": [{"id": d.id, "cx": d.cx, "cy": d.cy, "r": d.radius} for d in inst.disks],
        "points": [{"x": p.x, "y": p.y} for p in inst.points],
        "seed": inst.seed,
        "eps": inst.tolerance.eps,
        "min_feature": inst.tolerance.min_feature,
    }
    return json.dumps(doc, indent=1) + "\n"


def parse_instance(text: str, validate: bool = True) -> Instance:
    """Read an instance document; invalid instances raise unless ``validate`` is off.

    With validation off, detected problems are kept in ``Instance.issues``.
    """
    try:
        doc = json.loads(text)
        disks = tuple(make_disk(int(d["id"]), float(d["cx"]), float(d["cy"]), float(d["r"])) for d in doc["disks"])
        points = tuple(Point(float(p["x"]), float(p["y"])) for p in doc["points"])
        tol = TolerancePolicy(float(doc.get("eps", DEFAULT_TOL.eps)), float(doc.get("min_feature", DEFAULT_TOL.min_feature)))
        seed = int(doc.get("seed", 0))
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed instance document: {exc!r}") from exc
    if len({d.id for d in disks}) != len(disks):
        raise ParseError("duplicate disk ids")
    issues = validation_issues(disks, points, tol)
    if issues and validate:
        raise InvalidInstance("; ".join(issues))
    return Instance(disks, points, seed, tol, tuple(issues))


def load_instance(path, validate: bool = True) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), validate)


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_instance(inst))


# -- generation ----------------------------------------------------------------


def _place_disks(rng: np.random.Generator, n: int, box: float, margin: float, tries: int = 100) -> list[Disk]:
    centers: list[tuple[float, float]] = []
    for _ in range(n):
        for _ in range(tries):
            c = rng.uniform(0.0, box, 2)
            if all(abs(math.hypot(c[0] - x, c[1] - y) - 2.0) >= margin and math.hypot(c[0] - x, c[1] - y) >= margin for x, y in centers):
                break
        centers.append((float(c[0]), float(c[1])))
    return [make_disk(i, x, y) for i, (x, y) in enumerate(centers)]


def generate_random_instance(
    n: int,
    k: int,
    box_size: float,
    seed: int,
    *,
    tol: TolerancePolicy = DEFAULT_TOL,
    clearance: float = 0.05,
    disk_margin: float = 0.05,
    layouts: int = 200,
    patience: int = 25,
    point_samples: int = 20000,
) -> Instance:
    """Random unit disks in a square box plus up to ``k`` pairwise separated points.

    Candidate points are uniform in the box; covered ones and ones closer
    than ``clearance`` to a circle are rejected, and at most one point is
    kept per complement face.  Disk centers avoid near-tangency by
    ``disk_margin``.  Layouts are redrawn until one holds ``k`` points; once
    some layout holds at least two, at most ``patience`` more are tried
    before the best one is returned.  If no layout yields two separated
    points the call raises :class:`GenerationFailed`.
    """
    if n < 3 or k < 2:
        raise ValueError("need n >= 3 and k >= 2")
    rng = np.random.default_rng(seed)
    best: Instance | None = None
    since_best = 0
    for _ in range(layouts):
        if best is not None:
            since_best += 1
            if since_best > patience:
                break
        disks = _place_disks(rng, n, box_size, disk_margin)
        try:
            disks, _ = perturb_to_general_position(disks, [], tol, seed)
        except PerturbationFailed:
            continue
        ub = union_boundary(disks, tol)
        faces = complement_face_count(ub)
        if faces <= max(1, len(best.points) if best else 1):
            continue  # cannot beat what we already have
        target = min(k, faces)
        cx = np.array([d.cx for d in disks])
        cy = np.array([d.cy for d in disks])
        found: dict = {}
        drawn = 0
        while drawn < point_samples and len(found) < target:
            batch = rng.uniform(0.0, box_size, (256, 2))
            drawn += len(batch)
            gap = np.hypot(batch[:, 0:1] - cx[None, :], batch[:, 1:2] - cy[None, :]) - 1.0
            keep = batch[gap.min(axis=1) >= clearance]
            for (x, y), sig in zip(keep, ub.signatures(keep)):
                if sig not in found:
                    found[sig] = Point(float(x), float(y))
                    if len(found) == target:
                        break
        points = list(found.values())
        if len(points) < 2 or (best is not None and len(points) <= len(best.points)):
            continue
        if general_position_violations(disks, points, tol)[1]:
            continue
        best = Instance(tuple(disks), tuple(points), seed, tol)
        since_best = 0
        if len(points) == k:
            break
    if best is None:
        raise GenerationFailed(f"no layout of {n} disks in a {box_size}-box gave two separated points")
    return best


# -- pictures -------------------------------------------------------------------


def render_svg(inst: Instance, solution: Sequence[int] = (), trace=None, *, scale: float = 40.0) -> str:
    """SVG 1.1 picture: translucent disks, chosen disks outlined, points, and one polyline per trace step."""
    chosen = set(solution)
    xs = [d.cx - d.radius for d in inst.disks] + [d.cx + d.radius for d in inst.disks] + [p.x for p in inst.points]
    ys = [d.cy - d.radius for d in inst.disks] + [d.cy + d.radius for d in inst.disks] + [p.y for p in inst.points]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    pad = 0.5
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    w, h = (x1 - x0) * scale, (y1 - y0) * scale

    def tx(x):
        return (x - x0) * scale

    def ty(y):
        return (y1 - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2f}" height="{h:.2f}" viewBox="0 0 {w:.2f} {h:.2f}">',
        f'<rect x="0" y="0" width="{w:.2f}" height="{h:.2f}" fill="#ffffff"/>',
        '<g id="disks">',
    ]
    for d in inst.disks:
        style = 'fill="#3b6ea5" fill-opacity="0.35" stroke="#c0392b" stroke-width="3"' if d.id in chosen else 'fill="#7f8c8d" fill-opacity="0.15" stroke="#7f8c8d" stroke-width="0.8"'
        cls = "chosen" if d.id in chosen else "disk"
        out.append(f'<circle class="{cls}" data-id="{d.id}" cx="{tx(d.cx):.2f}" cy="{ty(d.cy):.2f}" r="{d.radius * scale:.2f}" {style}/>')
    out.append("</g>")
    if trace:
        palette = ("#e67e22", "#27ae60", "#8e44ad", "#16a085", "#d35400", "#2c3e50")
        out.append('<g id="trace">')
        for step in trace:
            pts = " ".join(f"{tx(p.x):.2f},{ty(p.y):.2f}" for p in step.pi)
            color = palette[step.depth % len(palette)]
            label = escape(f"depth {step.depth}, pair {step.pair}, |B|={len(step.chosen)}")
            out.append(f'<polyline class="pi" points="{pts}" fill="none" stroke="{color}" stroke-width="2"><title>{label}</title></polyline>')
        out.append("</g>")
    out.append('<g id="points">')
    for i, p in enumerate(inst.points):
        out.append(f'<circle class="point" data-index="{i}" cx="{tx(p.x):.2f}" cy="{ty(p.y):.2f}" r="3" fill="#000000"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
