"""Shared evaluation pipeline behind the CLI and the HTTP service.

Keeps a single code path for "score this voyage at cursor K": forecast the
remainder, score the composite route, compare against the planned route and
judge acceptability.  The what-if pipeline (planned route plus return-route
candidates, classified as a development series) lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from routewatch.coefficients import UNIT_WEIGHTS, CoefficientVector, Weights, evaluate_route
from routewatch.decision import (
    Candidate,
    classify_whatif,
    generate_return_routes,
    planned_candidate,
    select_best,
    whatif_series,
)
from routewatch.development import DevelopmentSeries
from routewatch.prediction import Acceptability, PredictedRoute, acceptability, predict
from routewatch.route_model import Route, Scenario
from routewatch.safety import SafetyConfig, first_unsafe_leg, p_collide


@dataclass(frozen=True)
class EvalConfig:
    weights: Weights = UNIT_WEIGHTS
    thresholds: Optional[dict[str, float]] = None
    safety: SafetyConfig = field(default_factory=SafetyConfig)


@dataclass(frozen=True)
class Evaluation:
    at: int
    planned_vector: CoefficientVector
    composite_vector: CoefficientVector
    prediction: PredictedRoute
    acceptability: Acceptability
    first_unsafe_leg: Optional[int]


def composite_at(scenario: Scenario, at: int) -> PredictedRoute:
    """Forecast composite at cursor ``at``; the finished voyage is itself."""
    planned_idx = scenario.planned_for(at)
    if planned_idx is not None and planned_idx == len(scenario.planned.waypoints) - 1:
        # Destination reached: nothing left to forecast.
        return PredictedRoute(scenario.actual, at)
    return predict(scenario, at)


def score_route(scenario: Scenario, route: Route, cfg: EvalConfig) -> CoefficientVector:
    p = p_collide(route, scenario.obstacles, cfg.safety, scenario.model, scenario.ship.positional_sigma)
    return evaluate_route(route, scenario.ship, scenario.model, p, cfg.weights)


def evaluate_at(scenario: Scenario, at: int, cfg: EvalConfig) -> Evaluation:
    """Single evaluation path: composite vector, planned vector, verdict."""
    prediction = composite_at(scenario, at)
    planned_vector = score_route(scenario, scenario.planned, cfg)
    composite_vector = score_route(scenario, prediction.composite, cfg)
    verdict = acceptability(composite_vector, planned_vector, cfg.thresholds)
    return Evaluation(
        at=at,
        planned_vector=planned_vector,
        composite_vector=composite_vector,
        prediction=prediction,
        acceptability=verdict,
        first_unsafe_leg=first_unsafe_leg(prediction.composite, scenario.obstacles),
    )


@dataclass(frozen=True)
class WhatifResult:
    planned: Candidate
    candidates: tuple[Candidate, ...]
    series: DevelopmentSeries
    classification: str
    winner_id: str


def run_whatif(
    scenario: Scenario,
    turn_points: Sequence[int],
    cfg: EvalConfig,
    sailed_through: Optional[int] = None,
) -> WhatifResult:
    """Planned route plus one return candidate per turn point, classified."""
    planned = planned_candidate(scenario, cfg.safety, cfg.weights)
    returns = generate_return_routes(
        scenario, sorted(turn_points), cfg.safety, cfg.weights, sailed_through
    )
    ordered = [planned, *returns]
    series = whatif_series(ordered)
    classification = classify_whatif(ordered)
    winner = select_best(ordered, cfg.weights)
    return WhatifResult(planned, tuple(returns), series, classification, winner.route.id)
