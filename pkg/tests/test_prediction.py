import math
import random
from dataclasses import replace

import pytest

from routewatch import geo
from routewatch.coefficients import UNIT_WEIGHTS, CoefficientVector, evaluate_route
from routewatch.geo import DistanceModel, GeoPoint
from routewatch.prediction import (
    Acceptability,
    PredictionError,
    acceptability,
    evaluate_prediction,
    predict,
)
from routewatch.route_model import (
    ObstacleMap,
    Scenario,
    ShipProfile,
    WaypointSpec,
    derive_legs,
    validate_route,
)
from routewatch.safety import SafetyConfig, first_unsafe_leg

PLANAR = DistanceModel.PLANAR
T0 = 1622505600.0


def route_from_points(points, speed_kn, route_id, label, waits_s=None):
    waits_s = waits_s or [0.0] * len(points)
    specs = []
    t = T0
    prev = None
    for (lat, lon), wait in zip(points, waits_s):
        pos = GeoPoint(lat, lon)
        if prev is not None:
            t += geo.distance(prev, pos, PLANAR) / speed_kn * 3600.0
        specs.append(WaypointSpec(pos, t, t + wait))
        t += wait
        prev = pos
    return derive_legs(specs, PLANAR, route_id, label)


def scenario_with_deviation(planned_pts, actual_pts, speed_kn=10.0, waits_s=None):
    planned = route_from_points(planned_pts, speed_kn, "p", "planned", waits_s)
    actual = route_from_points(actual_pts, speed_kn, "a", "actual")
    pairs = tuple((i, i) for i in range(len(actual_pts)))
    return Scenario(
        planned=planned,
        actual=actual,
        obstacles=ObstacleMap(),
        ship=ShipProfile(12.0),
        correspondence=pairs,
        model=PLANAR,
    )


def oracle_replay(scenario, at):
    """Independent forecast: add the planned leg vectors (degree space)."""
    start = scenario.actual.waypoints[at].position
    planned = scenario.planned.waypoints
    positions = []
    lat, lon = start.lat, start.lon
    for j in range(at, len(planned) - 1):
        lat += planned[j + 1].position.lat - planned[j].position.lat
        lon += planned[j + 1].position.lon - planned[j].position.lon
        positions.append((lat, lon))
    return positions


class TestPredict:
    def test_zero_deviation_fixpoint(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        s = scenario_with_deviation(pts, pts[:2])
        predicted = predict(s, 1)
        assert predicted.split_index == 1
        assert len(predicted.composite.waypoints) == len(pts)
        for wp, (lat, lon) in zip(predicted.composite.waypoints, pts):
            assert geo.distance(wp.position, GeoPoint(lat, lon), PLANAR) < 1e-6
        for wp, planned_wp in zip(predicted.composite.waypoints, s.planned.waypoints):
            assert abs(wp.eta - planned_wp.eta) <= 1.0
        assert predicted.provenance == ("sailed", "sailed", "predicted", "predicted")

    def test_offset_translates_every_waypoint(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        dlat, dlon = 0.05, -0.08
        actual = [pts[0], (pts[1][0] + dlat, pts[1][1] + dlon)]
        s = scenario_with_deviation(pts, actual)
        predicted = predict(s, 1)
        expected = oracle_replay(s, 1)
        suffix = predicted.composite.waypoints[2:]
        assert len(suffix) == len(expected)
        for wp, (lat, lon) in zip(suffix, expected):
            assert geo.distance(wp.position, GeoPoint(lat, lon), PLANAR) < 1e-6
            # Offset is exactly the deviation vector.
        for wp, (plat, plon) in zip(suffix, pts[2:]):
            assert wp.position.lat - plat == pytest.approx(dlat, abs=1e-9)
            assert wp.position.lon - plon == pytest.approx(dlon, abs=1e-9)

    def test_translation_equivariance(self):
        pts = [(0, 0), (0.4, 1.1), (0.1, 2.3), (-0.2, 3.0)]
        base_actual = [pts[0], (pts[1][0] + 0.02, pts[1][1] - 0.01)]
        d = (0.07, 0.11)
        shifted_actual = [base_actual[0], (base_actual[1][0] + d[0], base_actual[1][1] + d[1])]
        s1 = scenario_with_deviation(pts, base_actual)
        s2 = scenario_with_deviation(pts, shifted_actual)
        p1 = predict(s1, 1).composite.waypoints[2:]
        p2 = predict(s2, 1).composite.waypoints[2:]
        for w1, w2 in zip(p1, p2):
            assert w2.position.lat - w1.position.lat == pytest.approx(d[0], abs=1e-9)
            assert w2.position.lon - w1.position.lon == pytest.approx(d[1], abs=1e-9)

    def test_random_scenarios_match_oracle(self):
        rng = random.Random(2718)
        for _ in range(20):
            n = rng.randint(3, 8)
            pts = [(rng.uniform(-1, 1) * 0.5, float(i) + rng.uniform(-0.3, 0.3)) for i in range(n)]
            at = rng.randint(1, n - 2)
            actual = pts[:at] + [(pts[at][0] + rng.uniform(-0.2, 0.2), pts[at][1] + rng.uniform(-0.2, 0.2))]
            s = scenario_with_deviation(pts, actual)
            predicted = predict(s, at)
            for wp, (lat, lon) in zip(predicted.composite.waypoints[at + 1 :], oracle_replay(s, at)):
                assert geo.distance(wp.position, GeoPoint(lat, lon), PLANAR) < 1e-6

    def test_prefix_preserved(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        actual = [pts[0], (0.55, 1.02)]
        s = scenario_with_deviation(pts, actual)
        predicted = predict(s, 1)
        for wp, orig in zip(predicted.composite.waypoints[:2], s.actual.waypoints[:2]):
            assert wp.position == orig.position
            assert wp.eta == orig.eta

    def test_composite_passes_route_invariants(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        actual = [pts[0], (0.62, 1.1)]
        s = scenario_with_deviation(pts, actual, waits_s=[0, 1800, 0, 0])
        predicted = predict(s, 1)
        validate_route(predicted.composite, PLANAR)

    def test_waits_are_replayed(self):
        pts = [(0, 0), (0, 1), (0, 2), (0, 3)]
        s = scenario_with_deviation(pts, pts[:2], waits_s=[0, 0, 3600, 0])
        predicted = predict(s, 1)
        wp2 = predicted.composite.waypoints[2]
        assert wp2.wait_s == pytest.approx(3600.0, abs=1.0)

    def test_idempotent(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        actual = [pts[0], (0.6, 1.05)]
        s = scenario_with_deviation(pts, actual)
        first = predict(s, 1)
        # Feed the composite back in as the actual route with an extended pairing.
        s2 = replace(
            s,
            actual=replace(first.composite, label="actual"),
            correspondence=tuple((i, i) for i in range(len(first.composite.waypoints))),
        )
        second = predict(s2, 1)
        for w1, w2 in zip(first.composite.waypoints, second.composite.waypoints):
            assert w1.position == w2.position
            assert w1.eta == w2.eta

    def test_missing_correspondence(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        s = scenario_with_deviation(pts, pts[:3])
        s = replace(s, correspondence=((0, 0), (2, 2)))
        with pytest.raises(PredictionError, match="correspondence"):
            predict(s, 1)

    def test_empty_remainder(self):
        pts = [(0, 0), (0, 1)]
        s = scenario_with_deviation(pts, pts)
        with pytest.raises(PredictionError, match="no maneuvers"):
            predict(s, 1)


class TestEvaluatePrediction:
    def test_zero_deviation_matches_planned_vector(self):
        pts = [(0, 0), (0.5, 1), (0.2, 2), (0, 3)]
        s = scenario_with_deviation(pts, pts[:2])
        cfg = SafetyConfig()
        got = evaluate_prediction(s, 1, cfg)
        planned_vec = evaluate_route(s.planned, s.ship, PLANAR, 0.0)
        for a, b in zip(
            (got.s, got.d, got.t, got.c), (planned_vec.s, planned_vec.d, planned_vec.t, planned_vec.c)
        ):
            assert abs(a - b) < 1e-9

    def test_ten_percent_longer_drops_D_by_1_over_1_1(self):
        # Planned is a straight 3-point line; deviation at the midpoint makes
        # the composite exactly 10% longer than its own straight line.
        pts = [(0.0, 0.0), (0.0, 10.0 / 60.0), (0.0, 20.0 / 60.0)]

        def ratio(h_nmi):
            actual = [pts[0], (h_nmi / 60.0, 10.0 / 60.0)]
            s = scenario_with_deviation(pts, actual)
            comp = predict(s, 1).composite
            l_e = geo.distance(comp.waypoints[0].position, comp.waypoints[-1].position, PLANAR)
            return comp.length_nmi / l_e

        lo, hi = 0.1, 30.0
        for _ in range(80):
            mid = (lo + hi) / 2
            if ratio(mid) < 1.1:
                lo = mid
            else:
                hi = mid
        h = (lo + hi) / 2
        actual = [pts[0], (h / 60.0, 10.0 / 60.0)]
        s = scenario_with_deviation(pts, actual)
        cfg = SafetyConfig()
        vec = evaluate_prediction(s, 1, cfg)
        planned_vec = evaluate_route(s.planned, s.ship, PLANAR, 0.0)
        assert planned_vec.d == pytest.approx(1.0)
        assert vec.d == pytest.approx(planned_vec.d / 1.1, abs=1e-6)
        assert vec.s == planned_vec.s == 1.0


class TestAcceptability:
    def vec(self, s=1.0, d=1.0, t=1.0, c=1.0):
        return CoefficientVector.build(s, d, t, c)

    def test_identical_vectors_acceptable(self):
        v = self.vec(0.9, 0.8, 0.7, 0.5)
        result = acceptability(v, v)
        assert result.acceptable
        assert result.reasons == ()

    def test_zero_safety_always_advises_replan(self):
        result = acceptability(self.vec(s=0.0), self.vec(s=0.0))
        assert not result.acceptable
        assert "safety" in result.reasons

    def test_distance_threshold_boundary(self):
        planned = self.vec()
        result = acceptability(self.vec(d=1.0 - 0.12), planned)
        assert not result.acceptable
        assert result.reasons == ("distance",)
        ok = acceptability(self.vec(d=1.0 - 0.09), planned)
        assert ok.acceptable

    def test_multiple_reasons_listed(self):
        planned = self.vec()
        result = acceptability(self.vec(s=0.9, d=0.8, t=0.85, c=0.5), planned)
        assert set(result.reasons) == {"safety", "distance", "time", "simplicity"}

    def test_custom_thresholds(self):
        planned = self.vec()
        result = acceptability(self.vec(d=0.85), planned, thresholds={"distance": 0.2})
        assert result.acceptable
        with pytest.raises(ValueError):
            acceptability(planned, planned, thresholds={"bogus": 0.1})
        with pytest.raises(ValueError):
            acceptability(planned, planned, thresholds={"distance": -0.1})

    def test_improvement_never_flags(self):
        planned = self.vec(0.5, 0.5, 0.5, 0.5)
        result = acceptability(self.vec(0.9, 0.9, 0.9, 0.9), planned)
        assert result.acceptable
