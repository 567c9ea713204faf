"""Planar geometry for monitoring-site generation.

Covers the local equirectangular projection, the line-of-sight model that
turns a maximum building height into a detection radius, square-lattice
candidate sites per subarea and PoI sampling along road polylines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import shapely
from shapely.geometry import Polygon

METERS_PER_DEGREE = 111320.0
ROAD_CLASSES = ("primary", "secondary", "residential")


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinate: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")


@dataclass(frozen=True)
class PlanarPoint:
    x: float  # meters east of origin
    y: float  # meters north of origin

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite planar point: ({self.x}, {self.y})")

    def distance_to(self, other: PlanarPoint) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class LosParams:
    """Line-of-sight parameters, all in meters.

    ``h_v`` is the vehicle height, ``h_u`` the drone altitude, ``w_bv`` the
    horizontal gap between an obstructing building and the vehicle, and
    ``r_max`` caps the detection radius (camera-limited range).
    """

    h_v: float = 2.0
    h_u: float = 500.0
    w_bv: float = 4.0
    r_max: float = 1000.0

    def __post_init__(self):
        if not (self.h_u > self.h_v >= 0):
            raise ValueError(f"need h_u > h_v >= 0, got h_u={self.h_u}, h_v={self.h_v}")
        if self.w_bv <= 0:
            raise ValueError(f"w_bv must be positive, got {self.w_bv}")
        if self.r_max <= 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")


@dataclass(frozen=True)
class Subarea:
    boundary: tuple[PlanarPoint, ...]
    h_max: float
    id: str
    polygon: Polygon = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.boundary) < 3:
            raise ValueError(f"subarea {self.id!r}: polygon needs >= 3 vertices")
        if not self.h_max > 0:
            raise ValueError(f"subarea {self.id!r}: h_max must be positive, got {self.h_max}")
        poly = Polygon([(p.x, p.y) for p in self.boundary])
        if not poly.is_valid or poly.area <= 0:
            raise ValueError(f"subarea {self.id!r}: polygon is not simple")
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "polygon", poly)


@dataclass(frozen=True)
class RoadSegment:
    points: tuple[PlanarPoint, ...]
    road_class: str
    id: int

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError(f"segment {self.id}: polyline needs >= 2 points")
        if self.road_class not in ROAD_CLASSES:
            raise ValueError(f"segment {self.id}: unknown road class {self.road_class!r}")
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def length(self) -> float:
        xy = as_array(self.points)
        return float(np.hypot(*np.diff(xy, axis=0).T).sum())


@dataclass(frozen=True)
class RoadNetwork:
    segments: tuple[RoadSegment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments or self.total_length <= 0:
            raise ValueError("road network has zero total length")

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    def filter_classes(self, classes: Iterable[str]) -> RoadNetwork:
        """Keep only segments of the given classes; raises if none remain."""
        keep = set(classes)
        return RoadNetwork(tuple(s for s in self.segments if s.road_class in keep))


@dataclass(frozen=True)
class PoI:
    position: PlanarPoint
    radius: float
    source_segment: int

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"PoI radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class CandidateSite:
    position: PlanarPoint
    subarea_id: str


def as_array(points: Sequence[PlanarPoint]) -> np.ndarray:
    """Stack planar points into an ``(n, 2)`` float array."""
    if len(points) == 0:
        return np.zeros((0, 2))
    return np.array([(p.x, p.y) for p in points], dtype=float)


def project(points: Sequence[GeoPoint], origin: GeoPoint) -> list[PlanarPoint]:
    """Equirectangular projection about ``origin`` (meters east/north)."""
    scale_x = math.cos(math.radians(origin.lat)) * METERS_PER_DEGREE
    out = []
    for p in points:
        if not (math.isfinite(p.lat) and math.isfinite(p.lon)):
            raise ValueError(f"non-finite coordinate: ({p.lat}, {p.lon})")
        out.append(PlanarPoint((p.lon - origin.lon) * scale_x, (p.lat - origin.lat) * METERS_PER_DEGREE))
    return out


def unproject(points: Sequence[PlanarPoint], origin: GeoPoint) -> list[GeoPoint]:
    """Inverse of :func:`project`."""
    scale_x = math.cos(math.radians(origin.lat)) * METERS_PER_DEGREE
    return [GeoPoint(origin.lat + p.y / METERS_PER_DEGREE, origin.lon + p.x / scale_x) for p in points]


def los_angles(w_ub: float, w_bv: float, h_u: float, h_b: float, h_v: float) -> tuple[float, float]:
    """Return ``(tan_theta, tan_phi)`` for a drone/building/vehicle section.

    ``theta`` is the drone's viewing angle towards the vehicle, ``phi`` the
    angle the building top subtends from the vehicle. The vehicle is
    visible when ``tan_theta >= tan_phi``; see :func:`is_visible`.
    """
    if h_u == h_v:
        raise ZeroDivisionError("drone altitude equals vehicle height")
    if h_b == h_v:
        raise ZeroDivisionError("building height equals vehicle height")
    return (w_ub + w_bv) / (h_u - h_v), w_bv / (h_b - h_v)


def is_visible(tan_theta: float, tan_phi: float) -> bool:
    return tan_theta >= tan_phi


def los_radius(h_max: float, params: LosParams) -> float:
    """Largest horizontal drone-to-vehicle distance keeping line of sight.

    Buildings no taller than the vehicles do not obstruct, so the radius
    falls back to ``params.r_max``.
    """
    if not h_max > 0:
        raise ValueError(f"h_max must be positive, got {h_max}")
    if h_max <= params.h_v:
        return params.r_max
    radius = (params.h_u - params.h_v) / (h_max - params.h_v) * params.w_bv
    return min(params.r_max, radius)


def build_grid(subareas: Sequence[Subarea], rho: int, params: LosParams) -> list[CandidateSite]:
    """Square-lattice candidate sites with spacing ``R_l / rho`` per subarea.

    The lattice is anchored at each subarea's bounding-box lower-left corner
    and only points strictly inside the polygon are kept. Where subareas
    overlap, the first-listed one owns the point. Output is sorted by
    subarea id, then y, then x.
    """
    if isinstance(rho, bool) or int(rho) != rho or rho < 1:
        raise ValueError(f"rho must be a positive integer, got {rho}")
    sites = []
    for idx, sub in enumerate(subareas):
        spacing = los_radius(sub.h_max, params) / rho
        minx, miny, maxx, maxy = sub.polygon.bounds
        nx = math.floor((maxx - minx) / spacing + 1e-9)
        ny = math.floor((maxy - miny) / spacing + 1e-9)
        xs = minx + np.arange(nx + 1) * spacing
        ys = miny + np.arange(ny + 1) * spacing
        gx, gy = np.meshgrid(xs, ys)
        gx, gy = gx.ravel(), gy.ravel()
        keep = shapely.contains_xy(sub.polygon, gx, gy)
        # points within float noise of the boundary count as on it
        if keep.any():
            idx_in = np.flatnonzero(keep)
            near = shapely.distance(sub.polygon.boundary, shapely.points(gx[idx_in], gy[idx_in]))
            keep[idx_in[near <= 1e-9 * spacing]] = False
        for prev in subareas[:idx]:
            keep &= ~shapely.intersects_xy(prev.polygon, gx, gy)
        sites.extend(
            CandidateSite(PlanarPoint(float(x), float(y)), sub.id) for x, y in zip(gx[keep], gy[keep])
        )
    sites.sort(key=lambda s: (s.subarea_id, s.position.y, s.position.x))
    return sites


def radius_at(point: PlanarPoint, subareas: Sequence[Subarea], params: LosParams, default_h_max: float = 10.0) -> float:
    """Detection radius for a point: first enclosing subarea, else the default height."""
    for sub in subareas:
        if shapely.intersects_xy(sub.polygon, point.x, point.y):
            return los_radius(sub.h_max, params)
    return los_radius(default_h_max, params)


def arc_stations(total: float, spacing: float) -> np.ndarray:
    """Arc lengths ``0, spacing, 2*spacing, ...`` plus the end point ``total``."""
    n = math.floor(total / spacing + 1e-9)
    stations = np.arange(n + 1) * spacing
    if total - stations[-1] > 1e-9 * max(1.0, total):
        stations = np.append(stations, total)
    else:
        stations[-1] = total
    return stations


def sample_pois(
    network: RoadNetwork,
    spacing: float,
    subareas: Sequence[Subarea],
    params: LosParams,
    default_h_max: float = 10.0,
) -> list[PoI]:
    """Emit a PoI every ``spacing`` meters of arc length along each polyline.

    Both endpoints of every polyline are always included. Each PoI takes the
    detection radius of the first subarea enclosing it (boundary inclusive).
    """
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    pois = []
    for seg in network.segments:
        xy = as_array(seg.points)
        cum = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(xy, axis=0).T))])
        if cum[-1] == 0:
            stations = np.array([0.0])
        else:
            stations = arc_stations(float(cum[-1]), spacing)
        xs = np.interp(stations, cum, xy[:, 0])
        ys = np.interp(stations, cum, xy[:, 1])
        for x, y in zip(xs, ys):
            pos = PlanarPoint(float(x), float(y))
            pois.append(PoI(pos, radius_at(pos, subareas, params, default_h_max), seg.id))
    return pois
