"""Multi-tour planning under a per-drone travel budget.

``mta`` grows the number of k-means clusters one at a time until the
cheapest-insertion tour of every cluster fits the distance budget. ``rip``
is the random-initial-placement baseline used for comparison.
"""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field

import numpy as np

from droneplan.clustering import cluster_subsets, kmeans
from droneplan.routing import DistanceMatrix, Tour, distance_matrix, insertion_costs, cia_tour, tour_cost

log = logging.getLogger(__name__)


class DegenerateInput(ValueError):
    pass


class LTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FleetParams:
    v_kmh: float
    t_min: float
    m_d_km: float = field(init=False)

    def __post_init__(self):
        if not (self.v_kmh > 0 and self.t_min > 0):
            raise ValueError(f"speed and fly time must be positive, got v={self.v_kmh}, t={self.t_min}")
        object.__setattr__(self, "m_d_km", self.v_kmh * self.t_min / 60.0)

    @property
    def m_d_m(self) -> float:
        return self.m_d_km * 1000.0

    @classmethod
    def for_distance(cls, m_d_km: float, t_min: float = 60.0) -> FleetParams:
        """Fleet whose budget is ``m_d_km`` (speed chosen to match ``t_min``)."""
        return cls(m_d_km * 60.0 / t_min, t_min)


@dataclass(frozen=True)
class Plan:
    tours: tuple[Tour, ...]
    feasible: bool
    seed: int
    method: str
    m_d_km: float | None = None

    @property
    def L(self) -> int:
        return len(self.tours)

    def costs_km(self) -> list[float]:
        return [t.cost / 1000.0 for t in self.tours]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "seed": self.seed,
            "L": self.L,
            "m_d_km": self.m_d_km,
            "feasible": self.feasible,
            "tours": [t.to_json() for t in self.tours],
        }

    @classmethod
    def from_json(cls, data: dict) -> Plan:
        tours = tuple(Tour(tuple(t["order"]), float(t["cost_m"])) for t in data["tours"])
        return cls(tours, bool(data["feasible"]), int(data["seed"]), data["method"], data.get("m_d_km"))


@dataclass(frozen=True)
class PlanStats:
    cv: float
    mean_cost: float  # km
    mean_edges: float
    per_tour_costs: tuple[float, ...]  # km

    def to_json(self) -> dict:
        return {
            "cv": self.cv,
            "mean_cost_km": self.mean_cost,
            "mean_edges": self.mean_edges,
            "per_tour_costs_km": list(self.per_tour_costs),
        }


@dataclass(frozen=True)
class MonteCarloReport:
    runs: int
    seeds: tuple[int, ...]
    edges: tuple[float, ...]  # mean |T| per run
    costs: tuple[float, ...]  # mean tour cost per run, km
    max_costs: tuple[float, ...] = ()  # longest tour per run, km

    @property
    def edges_mean(self) -> float:
        return float(np.mean(self.edges))

    @property
    def edges_var(self) -> float:
        return float(np.var(self.edges))

    @property
    def cost_mean(self) -> float:
        return float(np.mean(self.costs))

    @property
    def cost_var(self) -> float:
        return float(np.var(self.costs))

    def feasible_fraction(self, m_d_km: float) -> float:
        """Share of runs whose longest tour fits the budget."""
        return float(np.mean([c <= m_d_km for c in self.max_costs]))

    def to_json(self) -> dict:
        return {
            "runs": self.runs,
            "edges": {"mean": self.edges_mean, "var": self.edges_var},
            "mean_cost_km": {"mean": self.cost_mean, "var": self.cost_var},
            "per_run": [
                {"seed": s, "mean_edges": e, "mean_cost_km": c, "max_cost_km": m}
                for s, e, c, m in zip(self.seeds, self.edges, self.costs, self.max_costs)
            ],
        }


def _points(points) -> np.ndarray:
    if not isinstance(points, np.ndarray):
        points = [(p.x, p.y) if hasattr(p, "x") else tuple(p) for p in points]
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("need at least one point")
    return pts


def cluster_tours(points, L: int, seed: int, D: DistanceMatrix | None = None) -> tuple[Tour, ...]:
    """One CIA tour per k-means cluster, for the k-means seed ``seed + L``."""
    pts = _points(points)
    D = D if D is not None else distance_matrix(pts)
    clustering = kmeans(pts, L, seed=seed + L)
    return tuple(cia_tour(D, subset) for subset in cluster_subsets(clustering))


def mta(points, fleet: FleetParams, seed: int = 0) -> Plan:
    """Fewest clusters ``L = 1, 2, ...`` whose tours all fit ``fleet.m_d_km``.

    Terminates at the latest when ``L`` equals the number of points, where
    every tour is a zero-cost singleton.
    """
    pts = _points(points)
    D = distance_matrix(pts)
    budget = fleet.m_d_m
    for L in range(1, len(pts) + 1):
        tours = cluster_tours(pts, L, seed, D)
        worst = max(t.cost for t in tours)
        log.debug("mta L=%d worst tour %.1f m (budget %.1f m)", L, worst, budget)
        if worst <= budget:
            return Plan(tours, True, seed, "MTA", fleet.m_d_km)
    raise AssertionError("unreachable: singleton tours always fit the budget")


def rip(points, L: int, seed: int = 0, fleet: FleetParams | None = None) -> Plan:
    """Random initial placement baseline.

    Seeds ``L`` tours with distinct random nodes, then repeatedly performs
    the globally cheapest insertion over all tours (ties: lowest node, then
    lowest tour, then lowest edge position). The plan may exceed the budget.
    """
    pts = _points(points)
    n = len(pts)
    if not 1 <= L <= n:
        raise LTooLarge(f"L={L} must lie in [1, {n}]")
    D = distance_matrix(pts)
    rng = np.random.default_rng(seed)
    starts = rng.choice(n, size=L, replace=False)
    orders = [[int(s)] for s in starts]
    costs = [0.0] * L

    outside = np.setdiff1d(np.arange(n), starts)
    best_cost = np.full((n, L), np.inf)
    best_pos = np.zeros((n, L), dtype=int)
    for t in range(L):
        best_cost[outside, t], best_pos[outside, t] = insertion_costs(D, orders[t], outside)

    while len(outside):
        sub = best_cost[outside]
        flat = int(np.argmin(sub))  # row-major: lowest node, then lowest tour
        row, t = divmod(flat, L)
        k = int(outside[row])
        orders[t].insert(int(best_pos[k, t]) + 1, k)
        costs[t] += float(sub[row, t])
        outside = np.delete(outside, row)
        best_cost[k, :] = np.inf
        if len(outside):
            best_cost[outside, t], best_pos[outside, t] = insertion_costs(D, orders[t], outside)

    tours = tuple(Tour(tuple(o), c) for o, c in zip(orders, costs))
    m_d = fleet.m_d_km if fleet else None
    feasible = fleet is None or max(t.cost for t in tours) <= fleet.m_d_m
    return Plan(tours, feasible, seed, "RIP", m_d)


def coefficient_of_variation(costs) -> float:
    """Sample standard deviation over mean."""
    costs = [float(c) for c in costs]
    if len(costs) < 2:
        raise DegenerateInput(f"need at least 2 costs, got {len(costs)}")
    mean = statistics.fmean(costs)
    if mean <= 0:
        raise DegenerateInput(f"mean cost must be positive, got {mean}")
    return statistics.stdev(costs) / mean


def plan_stats(plan: Plan) -> PlanStats:
    if not plan.tours:
        raise ValueError("plan has no tours")
    costs = plan.costs_km()
    try:
        cv = coefficient_of_variation(costs)
    except DegenerateInput:
        cv = 0.0
    mean_edges = statistics.fmean(t.n_edges for t in plan.tours)
    return PlanStats(cv, statistics.fmean(costs), mean_edges, tuple(costs))


def sweep_m_d(points, fleets, seed: int = 0) -> list[tuple[float, int]]:
    """``(m_d_km, L)`` from :func:`mta` for each fleet variant, same seed throughout."""
    return [(f.m_d_km, mta(points, f, seed).L) for f in fleets]


def monte_carlo_rip(points, L: int, runs: int = 100, seed: int = 0) -> MonteCarloReport:
    """Run :func:`rip` with seeds ``seed + 1 ... seed + runs`` and aggregate.

    Variances are population variances over runs, so a single run gives 0.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    seeds = tuple(seed + r for r in range(1, runs + 1))
    edges, costs, max_costs = [], [], []
    for s in seeds:
        st = plan_stats(rip(points, L, s))
        edges.append(st.mean_edges)
        costs.append(st.mean_cost)
        max_costs.append(max(st.per_tour_costs))
    return MonteCarloReport(runs, seeds, tuple(edges), tuple(costs), tuple(max_costs))


def verify_plan(plan: Plan, n_points: int, D: DistanceMatrix | None = None) -> None:
    """Raise ``ValueError`` unless tours partition ``range(n_points)`` and costs recompute."""
    seen = sorted(i for t in plan.tours for i in t.order)
    if seen != list(range(n_points)):
        raise ValueError("tours do not partition the node set")
    if D is not None:
        for t in plan.tours:
            if abs(tour_cost(t, D) - t.cost) > 1e-9 * max(1.0, t.cost):
                raise ValueError(f"tour cost drift: stored {t.cost}, recomputed {tour_cost(t, D)}")
