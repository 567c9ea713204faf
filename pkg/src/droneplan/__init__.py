"""Drone monitoring-site selection and distance-bounded multi-tour planning."""

from droneplan.clustering import Clustering, cluster_subsets, kmeans
from droneplan.coverage import CoverageMatrix, CoverSolution, build_coverage, exact_cover, greedy_cover
from droneplan.geometry import LosParams, PlanarPoint, build_grid, los_radius, project, sample_pois
from droneplan.planner import FleetParams, Plan, coefficient_of_variation, monte_carlo_rip, mta, plan_stats, rip
from droneplan.routing import DistanceMatrix, Tour, cia_tour, distance_matrix, tour_cost

__version__ = "0.1.0"
