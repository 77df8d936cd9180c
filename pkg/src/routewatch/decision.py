"""Candidate route comparison: dominance, safety-first selection, what-ifs.

Candidates are ranked on two criteria: safety (the S coefficient) and
optimality (the weighted combination of D, T and C).  Selection is a
two-step sweep over the Pareto front: keep the safest front members, then
the best optimality score among them, with deterministic tie-breaking.

Return-route generation models "turn back to the plan now": keep the sailed
prefix up to a turn point, run one direct leg to the next planned waypoint
ahead of the ship, then follow the plan to the destination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from routewatch import geo
from routewatch.coefficients import UNIT_WEIGHTS, CoefficientVector, Weights, evaluate_route
from routewatch.development import DevelopmentSeries, classify
from routewatch.route_model import Route, Scenario, Waypoint
from routewatch.safety import SafetyConfig, p_collide

SAFETY_TIE_TOL = 1e-9


class DecisionError(ValueError):
    """Invalid candidate set or impossible return-route request."""


@dataclass(frozen=True)
class CriteriaSplit:
    """(safety, optimality) scores a candidate is ranked on."""

    safety_score: float
    optimality_score: float

    @classmethod
    def from_vector(cls, v: CoefficientVector, weights: Weights = UNIT_WEIGHTS) -> "CriteriaSplit":
        return cls(v.s, weights.d * v.d + weights.t * v.t + weights.c * v.c)


@dataclass(frozen=True)
class Candidate:
    route: Route
    vector: CoefficientVector
    origin: str  # planned | predicted | return_from:<k> | user
    turn_point: Optional[int] = None

    def split(self, weights: Weights = UNIT_WEIGHTS) -> CriteriaSplit:
        return CriteriaSplit.from_vector(self.vector, weights)


def dominates(a: CriteriaSplit, b: CriteriaSplit) -> bool:
    """True iff a is at least as good on both criteria and better on one."""
    if a.safety_score < b.safety_score or a.optimality_score < b.optimality_score:
        return False
    return a.safety_score > b.safety_score or a.optimality_score > b.optimality_score


def pareto_front(candidates: Sequence[Candidate], weights: Weights = UNIT_WEIGHTS) -> list[Candidate]:
    """Non-dominated candidates, via a sort-and-sweep over safety groups."""
    if not candidates:
        return []
    splits = [(c.split(weights), c) for c in candidates]
    splits.sort(key=lambda item: (-item[0].safety_score, -item[0].optimality_score))
    front: list[Candidate] = []
    best_opt_strictly_safer = float("-inf")
    i = 0
    while i < len(splits):
        # One group of equal safety at a time.
        j = i
        while j < len(splits) and splits[j][0].safety_score == splits[i][0].safety_score:
            j += 1
        group = splits[i:j]
        group_best_opt = group[0][0].optimality_score
        if group_best_opt > best_opt_strictly_safer:
            front.extend(c for s, c in group if s.optimality_score == group_best_opt)
        best_opt_strictly_safer = max(best_opt_strictly_safer, group_best_opt)
        i = j
    return front


def select_best(candidates: Sequence[Candidate], weights: Weights = UNIT_WEIGHTS) -> Candidate:
    """Safety-first pick from the Pareto front.

    Among front members: highest safety (ties within 1e-9 kept), then
    highest optimality, then fewest waypoints, then lexicographic route id.
    """
    if not candidates:
        raise DecisionError("cannot select from an empty candidate list")
    front = pareto_front(candidates, weights)
    top_safety = max(c.split(weights).safety_score for c in front)
    safest = [c for c in front if c.split(weights).safety_score >= top_safety - SAFETY_TIE_TOL]
    top_opt = max(c.split(weights).optimality_score for c in safest)
    finalists = [c for c in safest if c.split(weights).optimality_score >= top_opt - SAFETY_TIE_TOL]
    finalists.sort(key=lambda c: (c.route.waypoint_count, c.route.id))
    return finalists[0]


def _evaluate_candidate(
    route: Route,
    scenario: Scenario,
    cfg: SafetyConfig,
    weights: Weights,
) -> CoefficientVector:
    p = p_collide(route, scenario.obstacles, cfg, scenario.model, scenario.ship.positional_sigma)
    return evaluate_route(route, scenario.ship, scenario.model, p, weights)


def planned_candidate(scenario: Scenario, cfg: SafetyConfig, weights: Weights = UNIT_WEIGHTS) -> Candidate:
    return Candidate(
        scenario.planned,
        _evaluate_candidate(scenario.planned, scenario, cfg, weights),
        "planned",
    )


def generate_return_routes(
    scenario: Scenario,
    turn_points: Sequence[int],
    cfg: SafetyConfig,
    weights: Weights = UNIT_WEIGHTS,
    sailed_through: Optional[int] = None,
) -> list[Candidate]:
    """Fully evaluated return-route candidates, one per turn point.

    The turn point's in-progress planned maneuver comes from the last
    correspondence anchor at or before it; the rejoin leg runs to the next
    planned waypoint and inherits that planned leg's speed.
    """
    limit = sailed_through if sailed_through is not None else len(scenario.actual.waypoints) - 1
    candidates = []
    for k in turn_points:
        if not 0 <= k <= limit:
            raise DecisionError(f"turn point {k} is beyond the sailed prefix (0..{limit})")
        route = _return_route(scenario, k)
        candidates.append(
            Candidate(route, _evaluate_candidate(route, scenario, cfg, weights), f"return_from:{k}", k)
        )
    return candidates


def _return_route(scenario: Scenario, k: int) -> Route:
    planned = scenario.planned
    actual = scenario.actual
    j = scenario.planned_leg_at(k)
    if j is None:
        raise DecisionError(f"no correspondence anchor at or before turn point {k}")
    rejoin_idx = j + 1
    if rejoin_idx >= len(planned.waypoints):
        raise DecisionError(f"turn point {k}: rejoin target missing (no planned waypoint after {j})")

    turn = actual.waypoints[k]
    rejoin_target = planned.waypoints[rejoin_idx]
    rejoin_dist = geo.distance(turn.position, rejoin_target.position, scenario.model)
    speed = planned.waypoints[j].leg_speed
    if rejoin_dist < 1e-9:
        raise DecisionError(f"turn point {k} coincides with the rejoin target")

    waypoints: list[Waypoint] = list(actual.waypoints[:k])
    waypoints.append(
        Waypoint(
            turn.position,
            turn.eta,
            turn.etd,
            speed,
            geo.bearing(turn.position, rejoin_target.position, scenario.model),
            rejoin_dist,
            turn.name,
            turn.risk,
        )
    )
    eta = turn.etd + rejoin_dist / speed * 3600.0
    for idx in range(rejoin_idx, len(planned.waypoints)):
        ref = planned.waypoints[idx]
        etd = eta + ref.wait_s
        waypoints.append(
            Waypoint(ref.position, eta, etd, ref.leg_speed, ref.leg_course, ref.leg_distance)
        )
        if ref.leg_speed is not None:
            eta = etd + ref.leg_distance / ref.leg_speed * 3600.0

    return Route(f"{scenario.id}-return-from-{k}", tuple(waypoints), "candidate")


def whatif_series(candidates: Sequence[Candidate]) -> DevelopmentSeries:
    """Candidate vectors as a development series, in the given order."""
    if not candidates:
        raise DecisionError("cannot build a series from no candidates")
    return DevelopmentSeries(tuple((i, c.vector) for i, c in enumerate(candidates)))


def classify_whatif(candidates: Sequence[Candidate], epsilon: float = 0.02) -> str:
    return classify(whatif_series(candidates), epsilon)
