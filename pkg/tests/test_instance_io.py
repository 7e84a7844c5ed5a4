import json
import math
import xml.etree.ElementTree as ET

import pytest

from canonical import FAR, RING_CENTROID, ring
from disksep.arrangement import separates_all
from disksep.errors import GenerationFailed, InvalidInstance, ParseError
from disksep.geometry import DEFAULT_TOL, Point, general_position_violations, make_disk
from disksep.instance_io import (
    ExperimentRecord,
    Instance,
    generate_random_instance,
    parse_instance,
    render_svg,
    write_instance,
)
from disksep.recsep import solve

SVG = "{http://www.w3.org/2000/svg}"


def ring_instance():
    return Instance(tuple(ring()), (RING_CENTROID, FAR), seed=0)


def test_round_trip():
    inst = ring_instance()
    assert parse_instance(write_instance(inst)) == inst


def test_round_trip_keeps_all_digits():
    d = make_disk(0, 0.1 + 0.2, 1 / 3)
    inst = Instance((d,), (Point(math.pi, -math.e),), seed=7)
    back = parse_instance(write_instance(inst))
    assert back.disks[0].cx == 0.1 + 0.2 and back.points[0].x == math.pi


def test_missing_radius():
    doc = json.loads(write_instance(ring_instance()))
    del doc["disks"][1]["r"]
    with pytest.raises(ParseError):
        parse_instance(json.dumps(doc))


def test_not_json():
    with pytest.raises(ParseError):
        parse_instance("{not json")


def test_non_separating_document():
    inst = Instance((make_disk(0, 0, 0),), (Point(-3, 0), Point(3, 0)))
    with pytest.raises(InvalidInstance):
        parse_instance(write_instance(inst))
    lenient = parse_instance(write_instance(inst), validate=False)
    assert lenient.issues


def test_generated_instance_is_valid():
    inst = generate_random_instance(20, 4, 10.0, 1)
    assert 2 <= len(inst.points) <= 4
    assert len(inst.disks) == 20
    assert separates_all(inst.disks, inst.points)
    assert general_position_violations(inst.disks, inst.points) == (set(), set())
    for p in inst.points:
        assert all(math.hypot(p.x - d.cx, p.y - d.cy) > d.radius for d in inst.disks)


def test_generator_is_deterministic():
    a = write_instance(generate_random_instance(12, 3, 4.5, 42))
    b = write_instance(generate_random_instance(12, 3, 4.5, 42))
    assert a == b


def test_three_disks_in_tiny_box_form_a_ring():
    inst = generate_random_instance(3, 2, 2.0, 2)
    assert len(inst.points) == 2
    ids = [d.id for d in inst.disks]
    # all three disks are needed, so they must pairwise overlap around a hole
    assert solve(inst.disks, inst.points).disk_ids == set(ids)


def test_sparse_layout_fails():
    with pytest.raises(GenerationFailed):
        generate_random_instance(3, 2, 100.0, 1, layouts=20)


def test_bad_arguments():
    with pytest.raises(ValueError):
        generate_random_instance(2, 2, 5.0, 1)


def test_experiment_record_csv():
    rec = ExperimentRecord("a", 10, 2, 6, 5, 12.5)
    assert rec.ratio == pytest.approx(1.2)
    assert rec.csv_row() == "a,10,2,6,5,1.200000,12.500"
    assert ExperimentRecord("b", 30, 2, 6, None, 1.0).csv_row() == "b,30,2,6,,,1.000"


def _parse_svg(text):
    return ET.fromstring(text.encode("utf-8"))


def test_empty_svg():
    root = _parse_svg(render_svg(Instance((), ())))
    assert root.tag == SVG + "svg"
    assert not root.findall(f".//{SVG}circle")


def test_ring_svg():
    root = _parse_svg(render_svg(ring_instance(), [0, 1, 2]))
    circles = root.findall(f".//{SVG}circle")
    assert sum(c.get("class") == "chosen" for c in circles) == 3
    assert sum(c.get("class") == "point" for c in circles) == 2


def test_svg_has_one_polyline_per_step():
    inst = generate_random_instance(14, 4, 4.5, 11)
    sol = solve(inst.disks, inst.points)
    root = _parse_svg(render_svg(inst, sorted(sol.disk_ids), sol.separation.trace))
    lines = root.findall(f".//{SVG}polyline")
    assert len(lines) == len(sol.separation.trace) >= 1
    depths = {s.depth for s in sol.separation.trace}
    assert depths == set(range(max(depths) + 1))


def test_default_tolerance_in_document():
    doc = json.loads(write_instance(ring_instance()))
    assert doc["eps"] == DEFAULT_TOL.eps and doc["min_feature"] == DEFAULT_TOL.min_feature
