"""Batch command line: ``disksep {gen,solve,oracle,verify,ratio}``.

Exit codes: 0 ok, 1 unreadable or invalid input, 2 generation failed,
3 self-verification failed, 4 instance too large for the oracle,
5 the checked subset does not separate the points.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
import time
from itertools import combinations

from .arrangement import separates, union_boundary
from .errors import GenerationFailed, InternalError, InvalidInstance, ParseError, ResolutionExhausted, TooLarge
from .instance_io import ExperimentRecord, Instance, generate_random_instance, load_instance, render_svg, save_instance
from .oracle import DEFAULT_MAX_N, exact_min_separator, grid_flood_separates
from .recsep import TraceStep, solve
from .two_point import two_point_separator

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_GENERATION = 2
EXIT_SELF_CHECK = 3
EXIT_TOO_LARGE = 4
EXIT_NOT_SEPARATED = 5

log = logging.getLogger("disksep")


def _pair_verdicts(inst: Instance, ids) -> list[tuple[int, int, bool, bool | None]]:
    """Per pair: (a, b, arrangement verdict, grid verdict or None if unresolved)."""
    chosen = [d for d in inst.disks if d.id in set(ids)]
    ub = union_boundary(chosen, inst.tolerance)
    out = []
    for a, b in combinations(range(len(inst.points)), 2):
        p, q = inst.points[a], inst.points[b]
        exact = separates(ub, p, q)
        try:
            grid = grid_flood_separates(chosen, p, q)
        except ResolutionExhausted:
            grid = None
        out.append((a, b, exact, grid))
    return out


def _load(path: str) -> Instance:
    return load_instance(path)


def cmd_gen(args) -> int:
    try:
        inst = generate_random_instance(args.n, args.k, args.box, args.seed)
    except (GenerationFailed, ValueError) as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    save_instance(inst, args.out)
    print(f"wrote {args.out}: {len(inst.disks)} disks, {len(inst.points)} points")
    return EXIT_OK


def _points_json(pts) -> list[list[float]]:
    return [[p.x, p.y] for p in pts]


def cmd_solve(args) -> int:
    inst = _load(args.inp)
    started = time.perf_counter()
    if args.two_point is not None:
        a, b = args.two_point
        if not (0 <= a < len(inst.points) and 0 <= b < len(inst.points)) or a == b:
            print(f"bad point indices {a} {b}", file=sys.stderr)
            return EXIT_PARSE
        res = two_point_separator(inst.disks, inst.points[a], inst.points[b], inst.tolerance)
        ids = res.disk_ids
        check_points = [a, b]
        steps = [TraceStep((a, b), (a, b), ids, ((a,), (b,)), res.pi.waypoints, 0)]
        doc = {
            "mode": "two-point",
            "pair": [a, b],
            "sigma": list(res.sigma),
            "pi": _points_json(res.pi.waypoints),
            "piece_path": [list(k) for k in res.piece_path],
        }
    else:
        sol = solve(inst.disks, inst.points, inst.tolerance)
        ids = sol.disk_ids
        check_points = list(range(len(inst.points)))
        steps = list(sol.separation.trace)
        doc = {
            "mode": "all-pairs",
            "covered_points": list(sol.covered_points),
            "cover_ids": sorted(sol.cover.disk_ids),
            "trace": [
                {
                    "depth": s.depth,
                    "group": list(s.group),
                    "pair": list(s.pair),
                    "chosen": sorted(s.chosen),
                    "parts": [list(p) for p in s.parts],
                    "pi": _points_json(s.pi),
                }
                for s in steps
            ],
        }
    elapsed = time.perf_counter() - started
    sub = Instance(inst.disks, tuple(inst.points[i] for i in check_points), inst.seed, inst.tolerance)
    verdicts = _pair_verdicts(sub, ids)
    ok = all(e and g is not False for _, _, e, g in verdicts)
    doc = {"disk_ids": sorted(ids), "size": len(ids), "ms": round(elapsed * 1000, 3), "verified": ok, **doc}
    text = json.dumps(doc, indent=1)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.out_svg:
        with open(args.out_svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(inst, sorted(ids), steps))
    if not ok:
        print("self-verification failed: output does not separate every pair", file=sys.stderr)
        return EXIT_SELF_CHECK
    print(f"{len(ids)} disks: {sorted(ids)}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args.inp)
    try:
        best = exact_min_separator(inst.disks, inst.points, args.max_n, inst.tolerance)
    except TooLarge as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_TOO_LARGE
    print(len(best))
    print(" ".join(str(i) for i in sorted(best)))
    return EXIT_OK


def _parse_ids(raw: list[str]) -> list[int]:
    out = []
    for tok in raw:
        out.extend(int(x) for x in tok.replace(",", " ").split())
    return out


def cmd_verify(args) -> int:
    inst = _load(args.inp)
    try:
        ids = _parse_ids(args.ids)
    except ValueError:
        print(f"bad disk ids: {args.ids}", file=sys.stderr)
        return EXIT_PARSE
    unknown = set(ids) - {d.id for d in inst.disks}
    if unknown:
        print(f"unknown disk ids: {sorted(unknown)}", file=sys.stderr)
        return EXIT_PARSE
    verdicts = _pair_verdicts(inst, ids)
    disagree = False
    for a, b, exact, grid in verdicts:
        g = "unresolved" if grid is None else ("separated" if grid else "connected")
        print(f"pair {a} {b}: arrangement={'separated' if exact else 'connected'} grid={g}")
        disagree |= grid is not None and grid != exact
    if disagree or any(g is None for *_, g in verdicts):
        print("verifiers disagree", file=sys.stderr)
        return EXIT_SELF_CHECK
    if not all(e for _, _, e, _ in verdicts):
        return EXIT_NOT_SEPARATED
    return EXIT_OK


def cmd_ratio(args) -> int:
    records = []
    for seed in range(args.seed0, args.seed0 + args.trials):
        try:
            inst = generate_random_instance(args.n, args.k, args.box, seed)
        except GenerationFailed as exc:
            log.warning("seed %d skipped: %s", seed, exc)
            continue
        t0 = time.perf_counter()
        sol = solve(inst.disks, inst.points, inst.tolerance)
        ms = (time.perf_counter() - t0) * 1000
        opt = None
        if len(inst.disks) <= args.max_n:
            opt = len(exact_min_separator(inst.disks, inst.points, args.max_n, inst.tolerance))
        records.append(ExperimentRecord(f"n{args.n}-k{args.k}-s{seed}", len(inst.disks), len(inst.points), len(sol.disk_ids), opt, ms))
    fresh = not os.path.exists(args.out_csv) or os.path.getsize(args.out_csv) == 0
    with open(args.out_csv, "a", encoding="utf-8") as fh:
        if fresh:
            fh.write(ExperimentRecord.CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")
    ratios = [r.ratio for r in records if r.ratio is not None]
    if ratios:
        print(f"{len(records)} trials, max ratio {max(ratios):.4f}, median ratio {statistics.median(ratios):.4f}")
    else:
        print(f"{len(records)} trials, no oracle ratios")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="disksep", description="Separating points with unit disks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--box", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="compute a separating subset")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out-json")
    s.add_argument("--out-svg")
    s.add_argument("--two-point", nargs=2, type=int, metavar=("S_IDX", "T_IDX"))
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exact minimum separator by enumeration")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check that a subset separates every pair")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--ids", nargs="*", default=[])
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("ratio", help="solver versus oracle on random instances")
    r.add_argument("--trials", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--box", type=float, required=True)
    r.add_argument("--seed0", type=int, default=1)
    r.add_argument("--out-csv", required=True)
    r.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    r.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParseError, InvalidInstance, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InternalError as exc:
        print(f"InternalError: {exc}", file=sys.stderr)
        return EXIT_SELF_CHECK


if __name__ == "__main__":
    sys.exit(main())
