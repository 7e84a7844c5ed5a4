"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Suites are built once per module and shared.  Ratio bounds were calibrated
on the first full run and are frozen below; a later run exceeding them is a
regression.
"""

import math
import time
from collections import Counter

import numpy as np
import pytest

from canonical import FAR, RING_CENTROID, lattice, ring, ring_of_4, two_rings
from disksep.arrangement import complement_face_count, separates, separates_all, union_boundary
from disksep.errors import PerturbationFailed, ResolutionExhausted
from disksep.geometry import Point, make_disk, perturb_to_general_position
from disksep.graphs import sigma_violations
from disksep.instance_io import generate_random_instance
from disksep.oracle import exact_min_separator, grid_flood_separates, grid_flood_separates_all
from disksep.recsep import solve
from disksep.two_point import two_point_separator

# frozen configuration
BOX_FACTOR = 1.3  # box side = BOX_FACTOR * sqrt(n)
SUITE_LAYOUTS = 2000
TWO_POINT_SEEDS = range(1, 501)
MULTI_COUNT = 200
MULTI_LAYOUTS = 400
MULTI_SEED_CAP = 3000
R2 = 4 / 3  # calibrated on the first full run (max observed 4/3), frozen
RK = 9 / 7  # calibrated on the first full run (max observed 9/7), frozen
CRITERION1_SECONDS = 60.0
UNION_SETS = 1000
FACE_POINT_SETS = 200
FACE_POINT_SAMPLES = 20000
AGREEMENT_PROBES = 10_000
EXTRA_PROBE_SEED0 = 10_001  # extra oracle runs when the suites yield too few probes
SOLVE_SECONDS = 10.0
ORACLE_SECONDS = 120.0


def box_for(n):
    return BOX_FACTOR * math.sqrt(n)


def _chosen(disks, ids):
    return [d for d in disks if d.id in ids]


@pytest.fixture(scope="module")
def two_point_suite():
    runs = []
    for seed in TWO_POINT_SEEDS:
        n = 5 + (seed - 1) % 12
        inst = generate_random_instance(n, 2, box_for(n), seed, layouts=SUITE_LAYOUTS)
        s, t = inst.points
        t0 = time.perf_counter()
        res = two_point_separator(inst.disks, s, t)
        solve_s = time.perf_counter() - t0
        chosen = _chosen(inst.disks, res.disk_ids)
        exact_ok = separates(chosen, s, t)
        t0 = time.perf_counter()
        grid_ok = grid_flood_separates(chosen, s, t)
        grid_s = time.perf_counter() - t0
        probes = []
        opt = exact_min_separator(inst.disks, inst.points, on_probe=lambda ids, ok: probes.append(ids))
        runs.append(
            dict(seed=seed, inst=inst, res=res, exact_ok=exact_ok, grid_ok=grid_ok, opt=len(opt), probes=probes, seconds=solve_s + grid_s)
        )
    return runs


@pytest.fixture(scope="module")
def multi_suite():
    runs = []
    seed = 0
    while len(runs) < MULTI_COUNT and seed < MULTI_SEED_CAP:
        seed += 1
        n = 8 + (seed - 1) % 9
        k = 3 + (seed - 1) % 4
        inst = generate_random_instance(n, k, box_for(n), seed, layouts=MULTI_LAYOUTS, patience=MULTI_LAYOUTS)
        if len(inst.points) < 3:
            continue  # this layout budget never reached three faces; try the next seed
        sol = solve(inst.disks, inst.points)
        chosen = _chosen(inst.disks, sol.disk_ids)
        probes = []
        opt = exact_min_separator(inst.disks, inst.points, on_probe=lambda ids, ok: probes.append(ids))
        sigmas = []
        for a in range(len(inst.points)):
            for b in range(a + 1, len(inst.points)):
                sigmas.append(two_point_separator(inst.disks, inst.points[a], inst.points[b]).sigma)
        runs.append(
            dict(
                seed=seed,
                k=k,
                inst=inst,
                sol=sol,
                exact_ok=separates_all(chosen, inst.points),
                grid_ok=grid_flood_separates_all(chosen, inst.points),
                opt=len(opt),
                probes=probes,
                sigmas=sigmas,
            )
        )
    return runs


def test_criterion_1_two_point_correctness(two_point_suite, criterion_report):
    bad = [r["seed"] for r in two_point_suite if not (r["exact_ok"] and r["grid_ok"])]
    seconds = sum(r["seconds"] for r in two_point_suite)
    ok = len(two_point_suite) == 500 and not bad and seconds < CRITERION1_SECONDS
    criterion_report(1, ok, f"{len(two_point_suite)} instances, {len(bad)} failures {bad[:10]}, solve+verify {seconds:.1f}s (limit {CRITERION1_SECONDS:.0f}s)")
    assert ok


def test_criterion_2_two_point_ratio(two_point_suite, criterion_report):
    below = [r["seed"] for r in two_point_suite if len(r["res"].disk_ids) < r["opt"]]
    ratios = [len(r["res"].disk_ids) / r["opt"] for r in two_point_suite]
    worst = max(ratios)
    ok = not below and worst <= R2
    criterion_report(2, ok, f"max ratio {worst:.4f} (frozen R2 {R2}), median {np.median(ratios):.4f}, below-opt {below}")
    assert ok


def test_criterion_3_multi_point(multi_suite, criterion_report):
    bad = [r["seed"] for r in multi_suite if not (r["exact_ok"] and r["grid_ok"])]
    below = [r["seed"] for r in multi_suite if len(r["sol"].disk_ids) < r["opt"]]
    ratios = [len(r["sol"].disk_ids) / r["opt"] for r in multi_suite]
    worst = max(ratios)
    sizes = dict(sorted(Counter(len(r["inst"].points) for r in multi_suite).items()))
    ok = len(multi_suite) == MULTI_COUNT and not bad and not below and worst <= RK
    criterion_report(
        3,
        ok,
        f"{len(multi_suite)} instances, point counts {sizes}, {len(bad)} failures, max ratio {worst:.4f} (frozen Rk {RK}), below-opt {below}",
    )
    assert ok


def test_criterion_4_canonical(criterion_report):
    disks2, holes = two_rings()
    cases = [
        ("ring", ring(), [RING_CENTROID, FAR], 3),
        ("ring-of-4", ring_of_4(), [Point(0, 0), Point(9, 9)], 4),
        ("two rings, 2 holes", disks2, holes, 3),
        ("two rings, 3 points", disks2, holes + [Point(20, 20)], 6),
    ]
    lines, ok = [], True
    for name, disks, pts, want in cases:
        opt = exact_min_separator(disks, pts)
        got = solve(disks, pts).disk_ids
        grid = grid_flood_separates_all(_chosen(disks, opt), pts) and grid_flood_separates_all(_chosen(disks, got), pts)
        good = len(opt) == want and len(got) == want and grid
        ok &= good
        lines.append(f"{name}: oracle {len(opt)} solver {len(got)} want {want}")
    criterion_report(4, ok, "; ".join(lines))
    assert ok


def _random_disks(rng, n, box):
    disks = [make_disk(i, *rng.uniform(0, box, 2)) for i in range(n)]
    try:
        disks, _ = perturb_to_general_position(disks, [])
    except PerturbationFailed:
        return None
    return disks


def test_criterion_5_union_complexity(criterion_report):
    rng = np.random.default_rng(5)
    violations, done, worst_arcs = [], 0, 0.0
    while done < UNION_SETS:
        n = int(rng.integers(1, 51))
        disks = _random_disks(rng, n, float(rng.uniform(0.6, 2.5)) * math.sqrt(n))
        if disks is None:
            continue
        ub = union_boundary(disks)
        arcs, faces = len(ub.arcs), complement_face_count(ub)
        worst_arcs = max(worst_arcs, arcs / n)
        if arcs > 7 * n or faces > 7 * n + 1:
            violations.append((done, n, arcs, faces))
        done += 1
    criterion_report(5, not violations, f"{done} disk sets, {len(violations)} violations, max arcs/n {worst_arcs:.3f}")
    assert not violations


def test_criterion_6_one_point_per_face(criterion_report):
    rng = np.random.default_rng(6)
    violations, done, most = [], 0, 0
    while done < FACE_POINT_SETS:
        n = int(rng.integers(3, 31))
        box = float(rng.uniform(0.8, 1.6)) * math.sqrt(n)
        disks = _random_disks(rng, n, box)
        if disks is None:
            continue
        ub = union_boundary(disks)
        pts = rng.uniform(-0.5, box + 0.5, (FACE_POINT_SAMPLES, 2))
        cx, cy = np.array([d.cx for d in disks]), np.array([d.cy for d in disks])
        gap = np.hypot(pts[:, None, 0] - cx[None, :], pts[:, None, 1] - cy[None, :]) - 1.0
        pts = pts[gap.min(axis=1) > 1e-4]
        faces = {sig for sig in ub.signatures(pts)}
        most = max(most, len(faces))
        if len(faces) > 7 * n + 1 or len(faces) > complement_face_count(ub):
            violations.append((done, n, len(faces)))
        done += 1
    criterion_report(6, not violations, f"{done} disk sets, {len(violations)} violations, most faces hit {most}")
    assert not violations


def test_criterion_7_sigma_invariant(two_point_suite, multi_suite, criterion_report):
    checked, bad = 0, []
    for r in two_point_suite:
        checked += 1
        if sigma_violations(r["res"].sigma, r["inst"].disks):
            bad.append(("two-point", r["seed"]))
    for r in multi_suite:
        for sigma in r["sigmas"]:
            checked += 1
            if sigma_violations(sigma, r["inst"].disks):
                bad.append(("multi", r["seed"]))
    criterion_report(7, not bad, f"{checked} sigma paths, {len(bad)} violations {bad[:5]}")
    assert not bad


def _add_probes(pool, inst, probes):
    pts = inst.points
    pairs = [(a, b) for a in range(len(pts)) for b in range(a + 1, len(pts))]
    pool.extend((inst, ids, pair) for ids in probes for pair in pairs)


def test_criterion_8_verifier_agreement(two_point_suite, multi_suite, criterion_report):
    pool = []
    for r in list(two_point_suite) + list(multi_suite):
        _add_probes(pool, r["inst"], r["probes"])
    from_suites = len(pool)
    seed = EXTRA_PROBE_SEED0
    while len(pool) < AGREEMENT_PROBES:
        n = 10 + seed % 7
        inst = generate_random_instance(n, 3, box_for(n), seed, layouts=SUITE_LAYOUTS)
        probes = []
        exact_min_separator(inst.disks, inst.points, on_probe=lambda ids, ok: probes.append(ids))
        _add_probes(pool, inst, probes)
        seed += 1
    rng = np.random.default_rng(8)
    picks = rng.choice(len(pool), size=min(AGREEMENT_PROBES, len(pool)), replace=False)
    disagree, unresolved, separated = [], 0, 0
    for i in sorted(picks.tolist()):
        inst, ids, (a, b) = pool[i]
        sub = _chosen(inst.disks, set(ids))
        p, q = inst.points[a], inst.points[b]
        exact = separates(sub, p, q)
        separated += exact
        try:
            grid = grid_flood_separates(sub, p, q)
        except ResolutionExhausted:
            unresolved += 1
            disagree.append((inst.seed, ids, (a, b), "unresolved"))
            continue
        if grid != exact:
            disagree.append((inst.seed, ids, (a, b), exact))
    ok = len(picks) == AGREEMENT_PROBES and not disagree
    criterion_report(
        8, ok, f"{len(picks)} probes from a pool of {len(pool)} ({from_suites} from the suites, {seed - EXTRA_PROBE_SEED0} extra oracle runs; {separated} separated), {len(disagree)} disagreements ({unresolved} unresolved)"
    )
    assert ok


def test_criterion_9_performance(criterion_report):
    timings = {}
    disks, holes = lattice(6, 10, seed=9)
    rng = np.random.default_rng(9)
    pts = [holes[i] for i in sorted(rng.choice(len(holes), 10, replace=False).tolist())]
    disks, pts = perturb_to_general_position(disks, pts)
    t0 = time.perf_counter()
    sol = solve(disks, pts)
    timings["solve lattice n=60 k=10"] = time.perf_counter() - t0
    assert separates_all(_chosen(disks, sol.disk_ids), pts)

    inst = generate_random_instance(60, 10, 10.0, 9)
    t0 = time.perf_counter()
    solve(inst.disks, inst.points)
    timings[f"solve random n=60 k={len(inst.points)}"] = time.perf_counter() - t0

    disks, holes = lattice(3, 6, seed=3)
    pts = [holes[0], holes[2], holes[4], holes[7]]
    disks, pts = perturb_to_general_position(disks, pts)
    t0 = time.perf_counter()
    opt = exact_min_separator(disks, pts)
    timings[f"oracle lattice n=18 (opt {len(opt)})"] = time.perf_counter() - t0

    inst = generate_random_instance(18, 6, box_for(18), 9, layouts=MULTI_LAYOUTS, patience=MULTI_LAYOUTS)
    t0 = time.perf_counter()
    opt = exact_min_separator(inst.disks, inst.points)
    timings[f"oracle random n=18 k={len(inst.points)} (opt {len(opt)})"] = time.perf_counter() - t0

    ok = all(v < (SOLVE_SECONDS if k.startswith("solve") else ORACLE_SECONDS) for k, v in timings.items())
    criterion_report(9, ok, ", ".join(f"{k}: {v:.2f}s" for k, v in timings.items()))
    assert ok
