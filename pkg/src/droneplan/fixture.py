"""Synthetic grid city used for tests, demos and the acceptance suite.

A 3 km x 2 km block split into three height zones (low-rise, mid-rise,
high-rise from west to east) with a 250 m street grid of primary,
secondary and residential roads, written as WGS84 GeoJSON.
"""

from __future__ import annotations

from pathlib import Path

from droneplan.config import PlanConfig
from droneplan.geojson import dump, feature_collection
from droneplan.geometry import GeoPoint, PlanarPoint, unproject

ORIGIN = GeoPoint(35.1700, 33.3600)
WIDTH_M, HEIGHT_M, BLOCK_M = 3000.0, 2000.0, 250.0

# (x_min, x_max, h_max_m)
ZONES = ((0.0, 1000.0, 8.0), (1000.0, 2000.0, 24.0), (2000.0, 3000.0, 45.0))

PRIMARY_X, SECONDARY_X = {5}, {1, 9}
PRIMARY_Y, SECONDARY_Y = {3}, {1, 6}

FIXTURE_CONFIG = PlanConfig(poi_spacing=20.0)


def _geo(xy, origin: GeoPoint) -> list[list[float]]:
    return [[g.lon, g.lat] for g in unproject([PlanarPoint(x, y) for x, y in xy], origin)]


def subarea_features(origin: GeoPoint = ORIGIN) -> list[dict]:
    feats = []
    for idx, (x0, x1, h) in enumerate(ZONES):
        ring = [(x0, 0.0), (x1, 0.0), (x1, HEIGHT_M), (x0, HEIGHT_M), (x0, 0.0)]
        feats.append(
            {
                "type": "Feature",
                "properties": {"id": f"zone{idx}", "h_max_m": h},
                "geometry": {"type": "Polygon", "coordinates": [_geo(ring, origin)]},
            }
        )
    return feats


def road_features(origin: GeoPoint = ORIGIN) -> list[dict]:
    feats = []

    def add(xy, cls):
        feats.append(
            {
                "type": "Feature",
                "properties": {"class": cls},
                "geometry": {"type": "LineString", "coordinates": _geo(xy, origin)},
            }
        )

    half = BLOCK_M / 2
    for i in range(int(WIDTH_M // BLOCK_M)):
        x = half + i * BLOCK_M
        cls = "primary" if i in PRIMARY_X else "secondary" if i in SECONDARY_X else "residential"
        add([(x, half), (x, HEIGHT_M - half)], cls)
    for j in range(int(HEIGHT_M // BLOCK_M)):
        y = half + j * BLOCK_M
        cls = "primary" if j in PRIMARY_Y else "secondary" if j in SECONDARY_Y else "residential"
        add([(half, y), (WIDTH_M - half, y)], cls)
    # ring-road style primary with several vertices
    add([(half, half), (900.0, 600.0), (1700.0, 1100.0), (2400.0, 1500.0), (WIDTH_M - half, HEIGHT_M - half)], "primary")
    return feats


def write_fixture(outdir: str | Path, config: PlanConfig = FIXTURE_CONFIG) -> dict[str, Path]:
    """Write ``roads.geojson``, ``subareas.geojson`` and ``config.toml`` into ``outdir``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "roads": out / "roads.geojson",
        "subareas": out / "subareas.geojson",
        "config": out / "config.toml",
    }
    dump(feature_collection(road_features()), paths["roads"])
    dump(feature_collection(subarea_features()), paths["subareas"])
    paths["config"].write_text(config.to_toml(), encoding="utf-8")
    return paths
