"""Run configuration loaded from TOML with unit-suffixed keys."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from droneplan.geometry import ROAD_CLASSES, LosParams
from droneplan.planner import FleetParams


class InputError(ValueError):
    """Malformed user input (config or dataset); maps to CLI exit code 2."""


SOLVERS = ("greedy", "exact")

# section -> key -> default
_SCHEMA = {
    "los": {"h_v_m": 2.0, "h_u_m": 500.0, "w_bv_m": 4.0, "r_max_m": 1000.0, "default_h_max_m": 10.0},
    "grid": {"rho": 5, "poi_spacing_m": 50.0},
    "fleet": {"v_kmh": 40.0, "t_min": 30.0},
    "plan": {
        "seed": 0,
        "solver": "greedy",
        "road_classes": list(ROAD_CLASSES),
        "exact_node_limit": 1_000_000,
    },
}


@dataclass(frozen=True)
class PlanConfig:
    los: LosParams = field(default_factory=LosParams)
    rho: int = 5
    poi_spacing: float = 50.0  # m
    fleet: FleetParams = field(default_factory=lambda: FleetParams(40.0, 30.0))
    seed: int = 0
    road_classes: tuple[str, ...] = ROAD_CLASSES
    solver: str = "greedy"
    default_h_max: float = 10.0  # m
    exact_node_limit: int = 1_000_000

    def __post_init__(self):
        if not self.road_classes:
            raise InputError("road_classes must not be empty")
        unknown = set(self.road_classes) - set(ROAD_CLASSES)
        if unknown:
            raise InputError(f"unknown road classes: {sorted(unknown)}")
        if self.solver not in SOLVERS:
            raise InputError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if isinstance(self.rho, bool) or not isinstance(self.rho, int) or self.rho < 1:
            raise InputError(f"rho must be a positive integer, got {self.rho!r}")
        if not self.poi_spacing > 0:
            raise InputError(f"poi_spacing_m must be positive, got {self.poi_spacing}")
        if not self.default_h_max > 0:
            raise InputError(f"default_h_max_m must be positive, got {self.default_h_max}")

    def with_overrides(self, seed=None, solver=None, road_classes=None) -> PlanConfig:
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if solver is not None:
            changes["solver"] = solver
        if road_classes is not None:
            changes["road_classes"] = tuple(road_classes)
        return replace(self, **changes)

    def to_toml(self) -> str:
        classes = ", ".join(f'"{c}"' for c in self.road_classes)
        return (
            "[los]\n"
            f"h_v_m = {self.los.h_v!r}\n"
            f"h_u_m = {self.los.h_u!r}\n"
            f"w_bv_m = {self.los.w_bv!r}\n"
            f"r_max_m = {self.los.r_max!r}\n"
            f"default_h_max_m = {self.default_h_max!r}\n"
            "\n[grid]\n"
            f"rho = {self.rho}\n"
            f"poi_spacing_m = {self.poi_spacing!r}\n"
            "\n[fleet]\n"
            f"v_kmh = {self.fleet.v_kmh!r}\n"
            f"t_min = {self.fleet.t_min!r}\n"
            "\n[plan]\n"
            f"seed = {self.seed}\n"
            f'solver = "{self.solver}"\n'
            f"road_classes = [{classes}]\n"
            f"exact_node_limit = {self.exact_node_limit}\n"
        )


def parse_config(data: dict) -> PlanConfig:
    """Build a :class:`PlanConfig` from parsed TOML; unknown keys are rejected."""
    values = {}
    for section, content in data.items():
        if section not in _SCHEMA or not isinstance(content, dict):
            raise InputError(f"unknown config section [{section}]")
        for key in content:
            if key not in _SCHEMA[section]:
                raise InputError(f"unknown key {key!r} in [{section}]")
    for section, defaults in _SCHEMA.items():
        given = data.get(section, {})
        for key, default in defaults.items():
            values[key] = given.get(key, default)
    try:
        los = LosParams(
            float(values["h_v_m"]), float(values["h_u_m"]), float(values["w_bv_m"]), float(values["r_max_m"])
        )
        fleet = FleetParams(float(values["v_kmh"]), float(values["t_min"]))
        return PlanConfig(
            los=los,
            rho=values["rho"],
            poi_spacing=float(values["poi_spacing_m"]),
            fleet=fleet,
            seed=int(values["seed"]),
            road_classes=tuple(values["road_classes"]),
            solver=values["solver"],
            default_h_max=float(values["default_h_max_m"]),
            exact_node_limit=int(values["exact_node_limit"]),
        )
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid config: {exc}") from exc


def load_config(path: str | Path | None) -> PlanConfig:
    if path is None:
        return PlanConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return parse_config(data)
