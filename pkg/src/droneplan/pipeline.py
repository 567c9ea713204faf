"""End-to-end runs: GeoJSON in, monitoring sites and tour plans out."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from droneplan import geojson
from droneplan.config import InputError, PlanConfig
from droneplan.coverage import CoverageMatrix, CoverSolution, build_coverage, solve_cover
from droneplan.geometry import CandidateSite, GeoPoint, PoI, RoadNetwork, Subarea, as_array, build_grid, sample_pois
from droneplan.planner import FleetParams, Plan, PlanStats, mta, monte_carlo_rip, plan_stats, sweep_m_d
from droneplan.svg import emit_line_chart, emit_svg

log = logging.getLogger(__name__)


@dataclass
class Sites:
    """Monitoring-site selection for one dataset and config."""

    origin: GeoPoint
    subareas: list[Subarea]
    network: RoadNetwork
    sites: list[CandidateSite]
    pois: list[PoI]
    coverage: CoverageMatrix
    cover: CoverSolution
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def points(self) -> np.ndarray:
        """Planar coordinates of the selected sites, in cover order."""
        return as_array([self.sites[i].position for i in self.cover.selected])

    def counts(self) -> dict[str, int]:
        return {
            "candidate_sites": len(self.sites),
            "pois": len(self.pois),
            "selected_sites": self.cover.objective,
            "road_segments": len(self.network.segments),
        }


@dataclass
class RunResult:
    config: PlanConfig
    sites: Sites
    plan: Plan
    stats: PlanStats
    timing: dict[str, float]

    def report(self) -> dict:
        return {
            "counts": self.sites.counts(),
            "m_d_km": self.config.fleet.m_d_km,
            "L": self.plan.L,
            "feasible": self.plan.feasible,
            "stats": self.stats.to_json(),
            "timing_s": self.timing,
        }


def select_sites(roads_path, subareas_path, config: PlanConfig) -> Sites:
    timing = {}
    t0 = time.perf_counter()
    geo_subareas = geojson.parse_subareas(geojson.read_features(subareas_path), str(subareas_path))
    geo_roads = geojson.parse_roads(geojson.read_features(roads_path), str(roads_path))
    origin = geojson.dataset_origin(geo_subareas, geo_roads)
    subareas = geojson.to_planar_subareas(geo_subareas, origin)
    network = geojson.to_planar_network(geo_roads, origin, config.road_classes)
    timing["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    sites = build_grid(subareas, config.rho, config.los)
    pois = sample_pois(network, config.poi_spacing, subareas, config.los, config.default_h_max)
    timing["discretize"] = time.perf_counter() - t0
    log.info("%d candidate sites, %d PoIs", len(sites), len(pois))

    t0 = time.perf_counter()
    C = build_coverage(sites, pois)
    cover = solve_cover(C, config.solver, config.exact_node_limit)
    timing["cover"] = time.perf_counter() - t0
    log.info("%s cover selected %d sites", cover.method, cover.objective)
    return Sites(origin, subareas, network, sites, pois, C, cover, timing)


def run_plan(roads_path, subareas_path, config: PlanConfig) -> RunResult:
    sites = select_sites(roads_path, subareas_path, config)
    t0 = time.perf_counter()
    plan = mta(sites.points, config.fleet, config.seed)
    timing = dict(sites.timing, mta=time.perf_counter() - t0)
    return RunResult(config, sites, plan, plan_stats(plan), timing)


def plan_document(result: RunResult) -> dict:
    s = result.sites
    return {
        "origin": {"lat": s.origin.lat, "lon": s.origin.lon},
        "fleet": {"v_kmh": result.config.fleet.v_kmh, "t_min": result.config.fleet.t_min},
        "counts": s.counts(),
        "cover": s.cover.to_json(),
        "points": s.points.tolist(),
        "plan": result.plan.to_json(),
    }


def write_outputs(result: RunResult, outdir) -> dict[str, Path]:
    """Write tours.geojson, plan.json, stats.json, plot.svg and run_report.json.

    Everything except run_report.json (which carries wall-clock timing) is
    byte-identical across runs with the same inputs and seed.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    s = result.sites
    paths = {
        "tours": out / "tours.geojson",
        "plan": out / "plan.json",
        "stats": out / "stats.json",
        "plot": out / "plot.svg",
        "report": out / "run_report.json",
    }
    geojson.dump(geojson.tours_to_geojson(result.plan, s.points, s.origin), paths["tours"])
    geojson.dump(plan_document(result), paths["plan"])
    stats = {"m_d_km": result.config.fleet.m_d_km, "L": result.plan.L, "feasible": result.plan.feasible}
    stats.update(result.stats.to_json())
    stats["counts"] = s.counts()
    geojson.dump(stats, paths["stats"])
    svg = emit_svg(result.plan, s.points, pois=as_array([p.position for p in s.pois]))
    paths["plot"].write_text(svg, encoding="utf-8")
    geojson.dump(result.report(), paths["report"])
    return paths


def load_plan(path) -> tuple[Plan, np.ndarray, dict]:
    """Read plan.json back as ``(plan, points, document)``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        plan = Plan.from_json(doc["plan"])
        points = np.asarray(doc["points"], dtype=float).reshape(-1, 2)
    except OSError as exc:
        raise InputError(f"cannot read plan {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a plan file ({exc})") from exc
    return plan, points, doc


def compare(plan: Plan, points: np.ndarray, runs: int, seed: int) -> dict:
    """MTA statistics beside an RIP Monte Carlo at the same tour count."""
    mta_stats = plan_stats(plan)
    report = monte_carlo_rip(points, plan.L, runs, seed)
    doc = {
        "L": plan.L,
        "runs": runs,
        "seed": seed,
        "m_d_km": plan.m_d_km,
        "mta": {"mean_edges": mta_stats.mean_edges, "mean_cost_km": mta_stats.mean_cost, "feasible": plan.feasible},
        "rip": report.to_json(),
    }
    if plan.m_d_km is not None:
        doc["rip"]["feasible_fraction"] = report.feasible_fraction(plan.m_d_km)
    return doc


def compare_table(doc: dict) -> str:
    """Text table with MTA value and RIP mean/variance for |T| and mean tour cost."""
    rip = doc["rip"]
    lines = [
        f"MTA vs RIP at L={doc['L']} ({doc['runs']} RIP runs)",
        f"{'':<14}{'MTA':>10}{'RIP mu':>10}{'RIP var':>10}",
        f"{'|T|':<14}{doc['mta']['mean_edges']:>10.1f}{rip['edges']['mean']:>10.1f}{rip['edges']['var']:>10.1f}",
        f"{'mean cost km':<14}{doc['mta']['mean_cost_km']:>10.2f}"
        f"{rip['mean_cost_km']['mean']:>10.2f}{rip['mean_cost_km']['var']:>10.2f}",
    ]
    if "feasible_fraction" in rip:
        lines.append(f"RIP runs within m_d={doc['m_d_km']:g} km: {rip['feasible_fraction']:.0%}")
    return "\n".join(lines) + "\n"


def sweep(points: np.ndarray, m_d_values, seed: int, t_min: float = 30.0) -> list[tuple[float, int]]:
    if list(m_d_values) != sorted(m_d_values):
        raise InputError("m_d values must be ascending")
    fleets = [FleetParams.for_distance(m, t_min) for m in m_d_values]
    return sweep_m_d(points, fleets, seed)


def write_sweep(rows: list[tuple[float, int]], outdir) -> dict[str, Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, svg_path = out / "sweep.csv", out / "sweep.svg"
    csv_path.write_text("m_d_km,L\n" + "".join(f"{m:g},{L}\n" for m, L in rows), encoding="utf-8")
    svg_path.write_text(
        emit_line_chart([m for m, _ in rows], [L for _, L in rows], "max travel distance m_d [km]", "tours L"),
        encoding="utf-8",
    )
    return {"csv": csv_path, "svg": svg_path}
