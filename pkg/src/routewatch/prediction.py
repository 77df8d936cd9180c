"""Forecast the remainder of a voyage by replaying planned maneuvers.

From the ship's current (possibly deviated) waypoint, the forecast assumes
the crew keeps executing the remaining planned maneuvers verbatim: the
planned (course, distance, speed, wait) tuple of each corresponding planned
waypoint, applied from wherever the ship actually is.  Any positional
discrepancy therefore persists to the destination, and the resulting
composite route (sailed prefix plus forecast suffix) is what gets scored.
"""

from __future__ import annotations

from dataclasses import dataclass

from routewatch import geo
from routewatch.coefficients import CoefficientVector, UNIT_WEIGHTS, Weights, evaluate_route
from routewatch.route_model import Route, Scenario, Waypoint
from routewatch.safety import SafetyConfig, p_collide

PROVENANCE_SAILED = "sailed"
PROVENANCE_PREDICTED = "predicted"

# Default per-coefficient degradation allowances (predicted vs planned).
DEFAULT_THRESHOLDS = {"safety": 0.05, "distance": 0.1, "time": 0.1, "simplicity": 0.25}


class PredictionError(ValueError):
    """Forecast is impossible for the requested waypoint."""


@dataclass(frozen=True)
class PredictedRoute:
    """Sailed prefix plus forecast suffix, as one full route."""

    composite: Route
    split_index: int

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(
            PROVENANCE_SAILED if i <= self.split_index else PROVENANCE_PREDICTED
            for i in range(len(self.composite.waypoints))
        )


@dataclass(frozen=True)
class Acceptability:
    acceptable: bool
    reasons: tuple[str, ...] = ()


def predict(scenario: Scenario, at: int) -> PredictedRoute:
    """Replay the planned maneuvers from actual waypoint ``at`` to destination.

    Requires an exact correspondence entry for ``at`` with planned maneuvers
    remaining after it.
    """
    actual = scenario.actual
    if not 0 <= at < len(actual.waypoints):
        raise PredictionError(f"waypoint index {at} outside the actual route")
    planned_idx = scenario.planned_for(at)
    if planned_idx is None:
        raise PredictionError(f"no correspondence entry for actual waypoint {at}")
    planned = scenario.planned
    if planned_idx >= len(planned.waypoints) - 1:
        raise PredictionError(f"planned route has no maneuvers left after waypoint {planned_idx}")

    current = actual.waypoints[at]
    prefix = list(actual.waypoints[: at + 1])
    # The current waypoint gains the first replayed leg.
    first_planned = planned.waypoints[planned_idx]
    composite: list[Waypoint] = prefix[:-1]
    composite.append(
        Waypoint(
            current.position,
            current.eta,
            current.etd,
            first_planned.leg_speed,
            first_planned.leg_course,
            first_planned.leg_distance,
            current.name,
            current.risk,
        )
    )

    position = current.position
    etd = current.etd
    for j in range(planned_idx, len(planned.waypoints) - 1):
        maneuver = planned.waypoints[j]
        arrival = planned.waypoints[j + 1]
        position = geo.project(position, maneuver.leg_course, maneuver.leg_distance, scenario.model)
        eta = etd + maneuver.leg_distance / maneuver.leg_speed * 3600.0
        etd = eta + arrival.wait_s
        composite.append(
            Waypoint(
                position,
                eta,
                etd,
                arrival.leg_speed,
                arrival.leg_course,
                arrival.leg_distance,
            )
        )

    route = Route(f"{actual.id}-predicted-at-{at}", tuple(composite), "predicted")
    return PredictedRoute(route, at)


def evaluate_prediction(
    scenario: Scenario,
    at: int,
    cfg: SafetyConfig,
    weights: Weights = UNIT_WEIGHTS,
) -> CoefficientVector:
    """Coefficients of the full composite route forecast from waypoint ``at``."""
    predicted = predict(scenario, at)
    p = p_collide(
        predicted.composite,
        scenario.obstacles,
        cfg,
        scenario.model,
        scenario.ship.positional_sigma,
    )
    return evaluate_route(predicted.composite, scenario.ship, scenario.model, p, weights)


def acceptability(
    predicted: CoefficientVector,
    planned: CoefficientVector,
    thresholds: dict[str, float] | None = None,
) -> Acceptability:
    """Judge whether the forecast degradation warrants plotting a new route.

    Lists every coefficient whose drop versus the planned route exceeds its
    allowance; a forecast with zero safety always advises replanning.
    """
    limits = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        for key, value in thresholds.items():
            if key not in limits:
                raise ValueError(f"unknown threshold {key!r}")
            if value < 0:
                raise ValueError(f"threshold {key} must be >= 0, got {value}")
            limits[key] = value

    degradations = {
        "safety": planned.s - predicted.s,
        "distance": planned.d - predicted.d,
        "time": planned.t - predicted.t,
        "simplicity": planned.c - predicted.c,
    }
    reasons = [name for name, drop in degradations.items() if drop > limits[name]]
    if predicted.s <= 0.0 and "safety" not in reasons:
        reasons.insert(0, "safety")
    if reasons:
        return Acceptability(False, tuple(reasons))
    return Acceptability(True)
