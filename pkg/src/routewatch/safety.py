"""Collision probability estimation for a route against an obstacle map.

Two modes:

* ``deterministic``: 1.0 if any leg geometrically touches any obstacle
  polygon, else 0.0.
* ``monte-carlo``: fraction of perturbed routes with at least one touching
  leg.  Each waypoint after the first is displaced perpendicular to its
  incoming leg by a zero-mean Gaussian cross-track error; displacements
  come from a counter-based generator, so a fixed seed gives bit-identical
  results on every platform and for any evaluation order.

Waypoints may carry an assumed-risk annotation (what-if fixtures describing
conditions the geometry cannot express); the annotation folds in
conservatively as a lower bound on the returned probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from routewatch import geo
from routewatch.geo import DistanceModel, GeoPoint
from routewatch.route_model import ObstacleMap, Route
from routewatch.rng import CounterRng

MODE_DETERMINISTIC = "deterministic"
MODE_MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class SafetyConfig:
    mode: str = MODE_DETERMINISTIC
    samples: int = 10000
    sigma: Optional[float] = None  # nmi; None falls back to ship.positional_sigma
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in (MODE_DETERMINISTIC, MODE_MONTE_CARLO):
            raise ValueError(f"unknown safety mode {self.mode!r}")
        if self.mode == MODE_MONTE_CARLO and self.samples < 100:
            raise ValueError(f"monte-carlo needs at least 100 samples, got {self.samples}")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def _leg_hits_map(a: GeoPoint, b: GeoPoint, obstacles: ObstacleMap) -> bool:
    return any(geo.segment_intersects(a, b, ob.polygon) for ob in obstacles)


def _route_positions_hit(positions: list[GeoPoint], obstacles: ObstacleMap) -> bool:
    return any(
        _leg_hits_map(positions[i], positions[i + 1], obstacles)
        for i in range(len(positions) - 1)
    )


def first_unsafe_leg(route: Route, obstacles: ObstacleMap) -> Optional[int]:
    """Smallest leg index that geometrically touches an obstacle, if any."""
    for i in range(len(route.waypoints) - 1):
        a, b = route.leg(i)
        if _leg_hits_map(a.position, b.position, obstacles):
            return i
    return None


def annotated_risk(route: Route) -> float:
    """Largest assumed-risk annotation carried by the route's waypoints."""
    return max((w.risk for w in route.waypoints if w.risk is not None), default=0.0)


def p_collide(
    route: Route,
    obstacles: ObstacleMap,
    cfg: SafetyConfig,
    model: DistanceModel = DistanceModel.PLANAR,
    sigma_default: float = 0.0,
) -> float:
    """Probability of touching an obstacle while following the route."""
    geometric = _p_collide_geometric(route, obstacles, cfg, model, sigma_default)
    return max(geometric, annotated_risk(route))


def _p_collide_geometric(
    route: Route,
    obstacles: ObstacleMap,
    cfg: SafetyConfig,
    model: DistanceModel,
    sigma_default: float,
) -> float:
    if len(obstacles) == 0:
        return 0.0
    nominal = [w.position for w in route.waypoints]
    if cfg.mode == MODE_DETERMINISTIC:
        return 1.0 if _route_positions_hit(nominal, obstacles) else 0.0

    sigma = cfg.sigma if cfg.sigma is not None else sigma_default
    n_displaced = len(nominal) - 1  # every waypoint except the start
    rng = CounterRng(cfg.rng_seed)
    # Pre-generated displacement table: draw (s * n_displaced + k) belongs to
    # sample s, waypoint k+1, independent of evaluation order.
    perp_courses = [(w.leg_course + 90.0) % 360.0 for w in route.waypoints[:-1]]
    hits = 0
    for s in range(cfg.samples):
        if sigma == 0.0:
            positions = nominal
        else:
            positions = [nominal[0]]
            for k in range(n_displaced):
                delta = sigma * rng.normal(s * n_displaced + k)
                positions.append(geo.displace(nominal[k + 1], perp_courses[k], delta, model))
        if _route_positions_hit(positions, obstacles):
            hits += 1
    return hits / cfg.samples
