"""Characteristic route quality coefficients and the weighted overall score.

Every coefficient measures closeness to the best possible route, the
straight start-to-destination segment sailed at the ship's calm-water
maximum speed:

* ``S`` safety, 1 minus the collision probability;
* ``D`` distance ratio, straight-line length over route length;
* ``T`` time ratio, straight-line-at-v-max time over route travel time
  (leg times plus waits), may exceed 1 with favourable currents;
* ``C`` simplicity, 2 over the waypoint count.

A route is compared to others through the weighted sum of the four values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from routewatch import geo
from routewatch.geo import DistanceModel
from routewatch.route_model import Route, ShipProfile

log = logging.getLogger(__name__)

# D may exceed 1 by at most this relative slack before it is an error
# (geodesic-model mismatch only; larger violations mean broken data).
D_CLAMP_SLACK = 1e-3

BEST_ROUTE_MIN_SUM = 4.0


@dataclass(frozen=True)
class Weights:
    """Non-negative weights for (S, D, T, C); all 1 by default."""

    s: float = 1.0
    d: float = 1.0
    t: float = 1.0
    c: float = 1.0

    def __post_init__(self) -> None:
        values = (self.s, self.d, self.t, self.c)
        if any(w < 0 for w in values):
            raise ValueError(f"weights must be non-negative, got {values}")
        if all(w == 0 for w in values):
            raise ValueError("at least one weight must be positive")


UNIT_WEIGHTS = Weights()


@dataclass(frozen=True)
class CoefficientVector:
    s: float
    d: float
    t: float
    c: float
    quality: float

    @classmethod
    def build(cls, s: float, d: float, t: float, c: float, weights: Weights = UNIT_WEIGHTS) -> "CoefficientVector":
        return cls(s, d, t, c, quality(s, d, t, c, weights))

    def reweighted(self, weights: Weights) -> "CoefficientVector":
        return CoefficientVector.build(self.s, self.d, self.t, self.c, weights)

    def as_dict(self) -> dict[str, float]:
        return {"S": self.s, "D": self.d, "T": self.t, "C": self.c, "quality": self.quality}


@dataclass(frozen=True)
class BestRouteReference:
    """Length and time of the straight start-to-destination reference."""

    l_e: float  # nautical miles
    t_e: float  # hours

    def __post_init__(self) -> None:
        if self.l_e <= 0 or self.t_e <= 0:
            raise ValueError(f"degenerate reference route (l_e={self.l_e}, t_e={self.t_e})")

    @classmethod
    def for_route(cls, route: Route, v_max: float, model: DistanceModel) -> "BestRouteReference":
        l_e = geo.distance(route.waypoints[0].position, route.waypoints[-1].position, model)
        return cls(l_e, l_e / v_max)


def coeff_distance(route: Route, ref: BestRouteReference) -> float:
    """D = straight-line length / route length, in (0, 1]."""
    l_r = route.length_nmi
    d = ref.l_e / l_r
    if d > 1.0:
        if d > 1.0 + D_CLAMP_SLACK:
            raise ValueError(
                f"route {route.id} is shorter ({l_r:.6f} nmi) than the straight line "
                f"({ref.l_e:.6f} nmi); broken geometry"
            )
        log.warning("route %s: clamping D=%.9f to 1.0 (geodesic model mismatch)", route.id, d)
        return 1.0
    return d


def route_travel_hours(route: Route) -> float:
    """Leg times plus waits at every waypoint except the destination."""
    hours = 0.0
    for wp in route.waypoints[:-1]:
        hours += wp.leg_distance / wp.leg_speed
        hours += wp.wait_s / 3600.0
    return hours


def coeff_time(route: Route, ship: ShipProfile, ref: BestRouteReference) -> float:
    """T = reference time / route travel time; may exceed 1."""
    return ref.t_e / route_travel_hours(route)


def coeff_simplicity(route: Route) -> float:
    """C = 2 / waypoint count; 1 exactly for two-waypoint routes."""
    return 2.0 / route.waypoint_count


def coeff_safety(p_collide: float) -> float:
    """S = 1 - collision probability."""
    if not 0.0 <= p_collide <= 1.0:
        raise ValueError(f"collision probability must be within [0, 1], got {p_collide}")
    return 1.0 - p_collide


def quality(s: float, d: float, t: float, c: float, weights: Weights = UNIT_WEIGHTS) -> float:
    """Weighted sum of the four coefficients."""
    return weights.s * s + weights.d * d + weights.t * t + weights.c * c


def best_route_check(v: CoefficientVector, tol: float = 1e-9) -> bool:
    """True when the coefficients add up to the best-route threshold of 4."""
    return v.s + v.d + v.t + v.c >= BEST_ROUTE_MIN_SUM - tol


def evaluate_route(
    route: Route,
    ship: ShipProfile,
    model: DistanceModel,
    p_collide: float,
    weights: Weights = UNIT_WEIGHTS,
) -> CoefficientVector:
    """All four coefficients of a route given its collision probability."""
    ref = BestRouteReference.for_route(route, ship.v_max, model)
    return CoefficientVector.build(
        coeff_safety(p_collide),
        coeff_distance(route, ref),
        coeff_time(route, ship, ref),
        coeff_simplicity(route),
        weights,
    )
