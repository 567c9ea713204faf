import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from droneplan.geometry import (
    GeoPoint,
    LosParams,
    PlanarPoint,
    RoadNetwork,
    RoadSegment,
    Subarea,
    build_grid,
    is_visible,
    los_angles,
    los_radius,
    project,
    sample_pois,
    unproject,
)

PARAMS = LosParams(h_v=2.0, h_u=500.0, w_bv=4.0)


def square(x0, y0, side, h, sid="a"):
    pts = [(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)]
    return Subarea(tuple(PlanarPoint(x, y) for x, y in pts), h, sid)


# R = (50 - 0) / (10 - 0) * 10 = 50 exactly
R50 = LosParams(h_v=0.0, h_u=50.0, w_bv=10.0)


def h_for_radius(radius, params=PARAMS):
    # invert R = (h_u - h_v) / (h_m - h_v) * w_bv
    return params.h_v + (params.h_u - params.h_v) * params.w_bv / radius


def straight(points, cls="residential", sid=0):
    return RoadSegment(tuple(PlanarPoint(x, y) for x, y in points), cls, sid)


class TestProject:
    def test_origin_maps_to_zero(self):
        o = GeoPoint(35.17, 33.36)
        (p,) = project([o], o)
        assert (p.x, p.y) == (0.0, 0.0)

    def test_one_degree_north(self):
        o = GeoPoint(35.0, 33.0)
        (p,) = project([GeoPoint(36.0, 33.0)], o)
        assert p.y == pytest.approx(111320.0, abs=1.0)
        assert p.x == 0.0

    def test_symmetric_points(self):
        o = GeoPoint(35.0, 33.0)
        a, b = project([GeoPoint(35.01, 33.02), GeoPoint(34.99, 32.98)], o)
        assert a.x == pytest.approx(-b.x)
        assert a.y == pytest.approx(-b.y)

    def test_east_scale_uses_origin_latitude(self):
        o = GeoPoint(60.0, 10.0)
        (p,) = project([GeoPoint(60.0, 11.0)], o)
        assert p.x == pytest.approx(111320.0 * 0.5, rel=1e-12)

    @settings(max_examples=50)
    @given(st.floats(-0.1, 0.1), st.floats(-0.1, 0.1))
    def test_round_trip(self, dlat, dlon):
        o = GeoPoint(35.17, 33.36)
        g = GeoPoint(o.lat + dlat, o.lon + dlon)
        (back,) = unproject(project([g], o), o)
        assert back.lat == pytest.approx(g.lat, abs=1e-12)
        assert back.lon == pytest.approx(g.lon, abs=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            GeoPoint(float("nan"), 0.0)
        with pytest.raises(ValueError):
            PlanarPoint(0.0, float("inf"))


class TestLosAngles:
    def test_boundary_equal_heights(self):
        tt, tp = los_angles(0, 4, 500, 500, 2)
        assert tt == tp == 4 / 498
        assert is_visible(tt, tp)

    def test_exactly_at_radius(self):
        # w_ub + w_bv equals the radius for h_b = 5
        tt, tp = los_angles(660, 4, 500, 5, 2)
        assert tt == pytest.approx(664 / 498)
        assert tp == pytest.approx(4 / 3)
        assert tt == pytest.approx(tp, rel=1e-12)

    def test_beyond_radius(self):
        tt, tp = los_angles(1000, 4, 500, 5, 2)
        assert tt == pytest.approx(1004 / 498)
        assert tp == pytest.approx(4 / 3)
        assert tt > tp

    def test_radius_is_angle_equality(self):
        for h in (5.0, 13.5, 52.0):
            r = los_radius(h, PARAMS)
            tt, tp = los_angles(r - PARAMS.w_bv, PARAMS.w_bv, PARAMS.h_u, h, PARAMS.h_v)
            assert tt == pytest.approx(tp, rel=1e-12)

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            los_angles(1, 4, 2, 5, 2)
        with pytest.raises(ZeroDivisionError):
            los_angles(1, 4, 500, 2, 2)


class TestLosRadius:
    def test_reference_heights(self):
        assert los_radius(5.0, PARAMS) == pytest.approx(664.0, abs=0.05)
        assert los_radius(52.0, PARAMS) == pytest.approx(39.8, abs=0.05)

    def test_height_at_altitude_gives_w_bv(self):
        assert los_radius(PARAMS.h_u, PARAMS) == pytest.approx(PARAMS.w_bv)

    def test_low_buildings_clamp_to_r_max(self):
        assert los_radius(2.0, PARAMS) == PARAMS.r_max
        assert los_radius(1.0, PARAMS) == PARAMS.r_max

    def test_cap_binds_just_above_vehicle(self):
        assert los_radius(2.5, PARAMS) == PARAMS.r_max

    def test_invalid(self):
        with pytest.raises(ValueError):
            los_radius(0.0, PARAMS)
        with pytest.raises(ValueError):
            LosParams(h_v=5, h_u=5)
        with pytest.raises(ValueError):
            LosParams(w_bv=0)

    @given(st.floats(2.01, 400.0), st.floats(0.01, 50.0))
    def test_strictly_decreasing(self, h, dh):
        params = LosParams(r_max=1e9)
        assert los_radius(h + dh, params) < los_radius(h, params)


def lattice_count_oracle(x0, y0, side, spacing):
    """Lattice points anchored at (x0, y0) strictly inside the open square."""
    n = 0
    i = 0
    while x0 + i * spacing <= x0 + side:
        j = 0
        while y0 + j * spacing <= y0 + side:
            x, y = x0 + i * spacing, y0 + j * spacing
            if x0 < x < x0 + side and y0 < y < y0 + side:
                n += 1
            j += 1
        i += 1
    return n


class TestBuildGrid:
    def test_square_rho5(self):
        sub = square(0, 0, 100, 10.0)
        assert los_radius(sub.h_max, R50) == 50.0
        sites = build_grid([sub], 5, R50)
        assert len(sites) == lattice_count_oracle(0, 0, 100, 10.0) == 81
        xs = sorted({round(s.position.x, 9) for s in sites})
        assert xs == [float(v) for v in range(10, 100, 10)]

    def test_square_rho1(self):
        sub = square(0, 0, 100, 10.0)
        sites = build_grid([sub], 1, R50)
        assert len(sites) == 1
        assert sites[0].position.x == pytest.approx(50.0)
        assert sites[0].position.y == pytest.approx(50.0)

    def test_inexact_radius_still_excludes_boundary(self):
        sub = square(0, 0, 100, h_for_radius(50.0))
        assert los_radius(sub.h_max, PARAMS) != 50.0
        assert len(build_grid([sub], 5, PARAMS)) == 81

    def test_degenerate_small_polygon(self):
        sub = square(0, 0, 5, h_for_radius(50.0))
        assert len(build_grid([sub], 1, PARAMS)) in (0, 1)

    def test_sites_inside_polygon(self):
        tri = Subarea((PlanarPoint(0, 0), PlanarPoint(300, 0), PlanarPoint(0, 200)), 24.0, "t")
        sites = build_grid([tri], 5, PARAMS)
        assert sites
        xy = np.array([(s.position.x, s.position.y) for s in sites])
        assert shapely.contains_xy(tri.polygon, xy[:, 0], xy[:, 1]).all()

    def test_spacing_equals_radius_over_rho(self):
        sub = square(0, 0, 1000, 24.0)
        sites = build_grid([sub], 5, PARAMS)
        spacing = los_radius(24.0, PARAMS) / 5
        xs = np.unique(np.round([s.position.x for s in sites], 6))
        assert np.allclose(np.diff(xs), spacing)

    def test_doubling_rho_quadruples(self):
        sub = square(0, 0, 2000, 24.0)
        n1 = len(build_grid([sub], 3, PARAMS))
        n2 = len(build_grid([sub], 6, PARAMS))
        assert n2 >= 4 * n1 * 0.95
        assert n2 > 3.5 * n1

    def test_overlap_first_listed_wins(self):
        a = square(0, 0, 100, h_for_radius(50.0), "b-first")
        b = square(50, 0, 100, h_for_radius(50.0), "a-second")
        sites = build_grid([a, b], 5, PARAMS)
        for s in sites:
            if s.subarea_id == "a-second":
                assert s.position.x > 100
        assert any(s.subarea_id == "a-second" for s in sites)

    def test_output_sorted(self):
        a = square(0, 0, 100, 24.0, "z")
        b = square(200, 0, 100, 24.0, "a")
        sites = build_grid([a, b], 5, PARAMS)
        keys = [(s.subarea_id, s.position.y, s.position.x) for s in sites]
        assert keys == sorted(keys)
        assert sites[0].subarea_id == "a"

    def test_bad_rho(self):
        with pytest.raises(ValueError):
            build_grid([square(0, 0, 100, 10.0)], 0, PARAMS)

    def test_invalid_subarea(self):
        with pytest.raises(ValueError):
            Subarea((PlanarPoint(0, 0), PlanarPoint(1, 1)), 10.0, "x")
        bowtie = (PlanarPoint(0, 0), PlanarPoint(1, 1), PlanarPoint(1, 0), PlanarPoint(0, 1))
        with pytest.raises(ValueError):
            Subarea(bowtie, 10.0, "x")
        with pytest.raises(ValueError):
            square(0, 0, 10, 0.0)


def arc_oracle(points, spacing):
    """Arc lengths at which PoIs should appear, via an explicit walk."""
    total = sum(math.dist(a, b) for a, b in zip(points, points[1:]))
    out, s = [], 0.0
    while s < total - 1e-9:
        out.append(s)
        s += spacing
    out.append(total)
    return out


def arc_length_of(points, q):
    """Arc-length position of q on the polyline (q assumed on it)."""
    acc = 0.0
    for a, b in zip(points, points[1:]):
        seg = math.dist(a, b)
        if abs(math.dist(a, q) + math.dist(q, b) - seg) < 1e-6:
            return acc + math.dist(a, q)
        acc += seg
    raise AssertionError("point not on polyline")


def point_at(points, s):
    acc = 0.0
    for a, b in zip(points, points[1:]):
        seg = math.dist(a, b)
        if seg > 0 and s <= acc + seg + 1e-9:
            t = min(max((s - acc) / seg, 0.0), 1.0)
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        acc += seg
    return points[-1]


class TestSamplePois:
    def sub(self):
        return [square(-1000, -1000, 3000, 10.0)]

    def test_straight_100(self):
        net = RoadNetwork((straight([(0, 0), (100, 0)]),))
        pois = sample_pois(net, 50.0, self.sub(), PARAMS)
        assert [p.position.x for p in pois] == [0.0, 50.0, 100.0]

    def test_short_segment_keeps_endpoints(self):
        net = RoadNetwork((straight([(0, 0), (10, 0)]),))
        pois = sample_pois(net, 50.0, self.sub(), PARAMS)
        assert [(p.position.x, p.position.y) for p in pois] == [(0.0, 0.0), (10.0, 0.0)]

    def test_l_shape(self):
        pts = [(0, 0), (60, 0), (60, 60)]
        net = RoadNetwork((straight(pts),))
        pois = sample_pois(net, 50.0, self.sub(), PARAMS)
        got = [arc_length_of(pts, (p.position.x, p.position.y)) for p in pois]
        assert got == pytest.approx(arc_oracle(pts, 50.0))
        assert got == pytest.approx([0, 50, 100, 120])
        assert (pois[2].position.x, pois[2].position.y) == pytest.approx((60.0, 40.0))

    def test_radius_from_enclosing_subarea(self):
        subs = [square(0, -10, 50, 52.0, "tall"), square(50, -10, 100, 5.0, "low")]
        net = RoadNetwork((straight([(10, 0), (100, 0), (300, 0)]),))
        pois = sample_pois(net, 40.0, subs, PARAMS, default_h_max=10.0)
        by_x = {round(p.position.x): p.radius for p in pois}
        assert by_x[10] == pytest.approx(los_radius(52.0, PARAMS))
        assert by_x[90] == pytest.approx(664.0)
        assert by_x[300] == pytest.approx(los_radius(10.0, PARAMS))

    def test_source_segment(self):
        net = RoadNetwork((straight([(0, 0), (10, 0)], sid=0), straight([(0, 5), (10, 5)], sid=7)))
        pois = sample_pois(net, 50.0, self.sub(), PARAMS)
        assert [p.source_segment for p in pois] == [0, 0, 7, 7]

    @settings(max_examples=60)
    @given(
        st.lists(st.tuples(st.floats(-500, 500), st.floats(-500, 500)), min_size=2, max_size=6),
        st.floats(1.0, 200.0),
    )
    def test_spacing_and_endpoints(self, pts, spacing):
        total = sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))
        if total < 1e-3:
            return
        net = RoadNetwork((straight(pts),))
        pois = sample_pois(net, spacing, self.sub(), PARAMS)
        got = [(p.position.x, p.position.y) for p in pois]
        stations = arc_oracle(pts, spacing)
        assert len(got) == len(stations)
        assert all(b - a <= spacing + 1e-9 for a, b in zip(stations, stations[1:]))
        for q, s in zip(got, stations):
            assert q == pytest.approx(point_at(pts, s), abs=1e-6)
        assert got[0] == pytest.approx(pts[0])
        assert got[-1] == pytest.approx(pts[-1], abs=1e-6)

    def test_bad_spacing(self):
        net = RoadNetwork((straight([(0, 0), (10, 0)]),))
        with pytest.raises(ValueError):
            sample_pois(net, 0.0, self.sub(), PARAMS)

    def test_network_validation(self):
        with pytest.raises(ValueError):
            straight([(0, 0)])
        with pytest.raises(ValueError):
            straight([(0, 0), (1, 1)], cls="motorway")
        with pytest.raises(ValueError):
            RoadNetwork((straight([(0, 0), (0, 0)]),))
