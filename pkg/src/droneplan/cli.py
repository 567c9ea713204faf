"""Command line interface.

Exit codes: 0 success, 2 input error, 3 PoIs that no site can cover.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from droneplan import pipeline
from droneplan.config import InputError, PlanConfig, load_config
from droneplan.coverage import UncoverablePoIs
from droneplan.fixture import write_fixture
from droneplan.geometry import ROAD_CLASSES, LosParams, los_radius

EXIT_OK, EXIT_INPUT, EXIT_UNCOVERABLE = 0, 2, 3

REFERENCE_HEIGHTS = (5.0, 5.5, 8.0, 10.0, 11.5, 13.5, 17.0, 24.0, 38.0, 45.0, 52.0)


def _classes(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _config(args) -> PlanConfig:
    cfg = load_config(args.config)
    classes = _classes(args.classes) if getattr(args, "classes", None) is not None else None
    if classes is not None:
        unknown = set(classes) - set(ROAD_CLASSES)
        if unknown:
            raise InputError(f"unknown road classes: {sorted(unknown)}")
        classes = [c for c in cfg.road_classes if c in classes]
        if not classes:
            raise InputError(f"--classes {args.classes!r} shares no class with config {list(cfg.road_classes)}")
    return cfg.with_overrides(seed=args.seed, solver=getattr(args, "solver", None), road_classes=classes)


def cmd_radius(args) -> int:
    if args.config:
        los = load_config(args.config).los
    else:
        los = LosParams(args.h_v, args.h_u, args.w_bv, args.r_max)
    heights = args.heights or list(REFERENCE_HEIGHTS)
    print(f"{'h_M [m]':>10} {'R [m]':>10}")
    for h in heights:
        if h <= 0:
            raise InputError(f"building height must be positive, got {h}")
        if h <= los.h_v:
            logging.warning("h_M=%g <= vehicle height %g: radius clamped to r_max", h, los.h_v)
        print(f"{h:>10.1f} {los_radius(h, los):>10.1f}")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = _config(args)
    print(f"max travel distance m_d = {cfg.fleet.m_d_km:g} km")
    result = pipeline.run_plan(args.roads, args.subareas, cfg)
    paths = pipeline.write_outputs(result, args.out)
    counts = result.sites.counts()
    print(
        f"{counts['candidate_sites']} candidate sites, {counts['pois']} PoIs, "
        f"{counts['selected_sites']} selected ({result.sites.cover.method})"
    )
    print(f"L = {result.plan.L} tours, feasible = {result.plan.feasible}, CV = {result.stats.cv:.3f}")
    for idx, cost in enumerate(result.stats.per_tour_costs):
        print(f"  tour {idx}: {cost:.3f} km")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return EXIT_OK


def cmd_compare(args) -> int:
    plan, points, doc = pipeline.load_plan(args.plan)
    seed = args.seed if args.seed is not None else plan.seed
    result = pipeline.compare(plan, points, args.runs, seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.json").write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    table = pipeline.compare_table(result)
    (out / "compare.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.plan:
        plan, points, doc = pipeline.load_plan(args.plan)
        seed = args.seed if args.seed is not None else plan.seed
        t_min = doc.get("fleet", {}).get("t_min", 30.0)
    else:
        if not (args.roads and args.subareas):
            raise InputError("sweep needs ROADS and SUBAREAS or --plan")
        cfg = _config(args)
        points = pipeline.select_sites(args.roads, args.subareas, cfg).points
        seed, t_min = cfg.seed, cfg.fleet.t_min
    rows = pipeline.sweep(points, args.m_d, seed, t_min)
    pipeline.write_sweep(rows, args.out)
    print("m_d_km,L")
    for m, L in rows:
        print(f"{m:g},{L}")
    return EXIT_OK


def cmd_fixture(args) -> int:
    paths = write_fixture(args.out)
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="droneplan", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="detection radius per maximum building height")
    p.add_argument("heights", nargs="*", type=float, help="h_M values in meters (default: 11 reference heights)")
    p.add_argument("--config")
    p.add_argument("--h-v", type=float, default=2.0)
    p.add_argument("--h-u", type=float, default=500.0)
    p.add_argument("--w-bv", type=float, default=4.0)
    p.add_argument("--r-max", type=float, default=1000.0)
    p.set_defaults(func=cmd_radius)

    def dataset_args(p, required=True):
        nargs = None if required else "?"
        p.add_argument("roads", nargs=nargs, help="roads GeoJSON (LineString + 'class')")
        p.add_argument("subareas", nargs=nargs, help="subareas GeoJSON (Polygon + 'h_max_m')")
        p.add_argument("--config", help="TOML config")
        p.add_argument("--seed", type=int)
        p.add_argument("--solver", choices=("greedy", "exact"))
        p.add_argument("--classes", help="comma-separated road classes to keep, e.g. primary,secondary")

    p = sub.add_parser("plan", help="select monitoring sites and plan tours")
    dataset_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="RIP Monte Carlo against an MTA plan")
    p.add_argument("--plan", required=True, help="plan.json from 'plan'")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="tour count against max travel distance")
    dataset_args(p, required=False)
    p.add_argument("--plan", help="reuse the sites of an existing plan.json")
    p.add_argument("--m-d", type=_floats, default=[10.0, 20.0, 40.0, 80.0], help="comma-separated km values")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fixture", help="write the synthetic city dataset")
    p.add_argument("out")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UncoverablePoIs as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCOVERABLE


if __name__ == "__main__":
    sys.exit(main())
