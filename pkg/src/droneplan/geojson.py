"""GeoJSON ingestion (subareas, roads) and tour export.

Inputs are WGS84 ``[lon, lat]``. Malformed features raise
:class:`~droneplan.config.InputError` naming the file and feature index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from droneplan.config import InputError
from droneplan.geometry import (
    ROAD_CLASSES,
    GeoPoint,
    PlanarPoint,
    RoadNetwork,
    RoadSegment,
    Subarea,
    project,
    unproject,
)
from droneplan.planner import Plan


@dataclass(frozen=True)
class GeoSubarea:
    id: str
    ring: tuple[GeoPoint, ...]
    h_max: float


@dataclass(frozen=True)
class GeoRoad:
    road_class: str
    line: tuple[GeoPoint, ...]


def read_features(path: str | Path) -> list[dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise InputError(f"{path}: expected a GeoJSON FeatureCollection")
    features = data.get("features")
    if not isinstance(features, list):
        raise InputError(f"{path}: FeatureCollection has no 'features' list")
    return features


def _geopoint(coord, where: str) -> GeoPoint:
    try:
        lon, lat = float(coord[0]), float(coord[1])
        return GeoPoint(lat, lon)
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{where}: bad coordinate {coord!r}: {exc}") from exc


def parse_subareas(features: list[dict], source: str = "subareas") -> list[GeoSubarea]:
    out = []
    for idx, feat in enumerate(features):
        where = f"{source}: feature {idx}"
        geom = (feat or {}).get("geometry") or {}
        if geom.get("type") != "Polygon":
            raise InputError(f"{where}: expected Polygon geometry, got {geom.get('type')!r}")
        rings = geom.get("coordinates") or []
        if not rings:
            raise InputError(f"{where}: polygon has no rings")
        ring = [_geopoint(c, where) for c in rings[0]]
        if len(ring) > 1 and ring[0] == ring[-1]:
            ring = ring[:-1]
        if len(ring) < 3:
            raise InputError(f"{where}: polygon needs >= 3 distinct vertices")
        props = feat.get("properties") or {}
        h = props.get("h_max_m")
        if isinstance(h, bool) or not isinstance(h, (int, float)) or not math.isfinite(h) or h <= 0:
            raise InputError(f"{where}: property 'h_max_m' must be a positive number, got {h!r}")
        sid = props.get("id", feat.get("id", f"{idx:04d}"))
        out.append(GeoSubarea(str(sid), tuple(ring), float(h)))
    if not out:
        raise InputError(f"{source}: no subareas")
    return out


def parse_roads(features: list[dict], source: str = "roads") -> list[GeoRoad]:
    out = []
    for idx, feat in enumerate(features):
        where = f"{source}: feature {idx}"
        geom = (feat or {}).get("geometry") or {}
        kind = geom.get("type")
        if kind == "LineString":
            lines = [geom.get("coordinates") or []]
        elif kind == "MultiLineString":
            lines = geom.get("coordinates") or []
        else:
            raise InputError(f"{where}: expected LineString geometry, got {kind!r}")
        cls = (feat.get("properties") or {}).get("class")
        if cls not in ROAD_CLASSES:
            raise InputError(f"{where}: property 'class' must be one of {ROAD_CLASSES}, got {cls!r}")
        for line in lines:
            pts = [_geopoint(c, where) for c in line]
            if len(pts) < 2:
                raise InputError(f"{where}: line needs >= 2 points")
            out.append(GeoRoad(cls, tuple(pts)))
    if not out:
        raise InputError(f"{source}: no roads")
    return out


def dataset_origin(subareas: list[GeoSubarea], roads: list[GeoRoad]) -> GeoPoint:
    """Mean of all input vertices."""
    pts = [p for s in subareas for p in s.ring] + [p for r in roads for p in r.line]
    return GeoPoint(float(np.mean([p.lat for p in pts])), float(np.mean([p.lon for p in pts])))


def to_planar_subareas(subareas: list[GeoSubarea], origin: GeoPoint) -> list[Subarea]:
    out = []
    for s in subareas:
        try:
            out.append(Subarea(tuple(project(s.ring, origin)), s.h_max, s.id))
        except ValueError as exc:
            raise InputError(f"subareas: {exc}") from exc
    return out


def to_planar_network(roads: list[GeoRoad], origin: GeoPoint, classes=ROAD_CLASSES) -> RoadNetwork:
    segments = [
        RoadSegment(tuple(project(r.line, origin)), r.road_class, idx)
        for idx, r in enumerate(roads)
        if r.road_class in classes
    ]
    if not segments:
        raise InputError(f"no road segments left after filtering to classes {list(classes)}")
    try:
        return RoadNetwork(tuple(segments))
    except ValueError as exc:
        raise InputError(f"roads: {exc}") from exc


def tours_to_geojson(plan: Plan, points: np.ndarray, origin: GeoPoint) -> dict:
    """One closed LineString per tour, WGS84 geometry plus planar coordinates in properties."""
    features = []
    for idx, tour in enumerate(plan.tours):
        ring = list(tour.order) + [tour.order[0]]
        planar = [PlanarPoint(float(points[i, 0]), float(points[i, 1])) for i in ring]
        geo = unproject(planar, origin)
        features.append(
            {
                "type": "Feature",
                "properties": {
                    "tour": idx,
                    "cost_m": tour.cost,
                    "n_sites": len(tour),
                    "order": list(tour.order),
                    "planar": [[p.x, p.y] for p in planar],
                },
                "geometry": {"type": "LineString", "coordinates": [[g.lon, g.lat] for g in geo]},
            }
        )
    return {"type": "FeatureCollection", "features": features}


def feature_collection(features: list[dict]) -> dict:
    return {"type": "FeatureCollection", "features": features}


def dump(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
