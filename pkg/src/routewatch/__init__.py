"""Voyage route validation toolkit.

Computes route quality coefficients (safety, distance, time, simplicity),
forecasts the remainder of a voyage under persistent deviation, tracks
quality trends and compares alternative return routes.
"""

from pathlib import Path

from routewatch.geo import DistanceModel, GeoPoint, Polygon
from routewatch.route_model import (
    ObstacleMap,
    Route,
    Scenario,
    ScenarioError,
    ShipProfile,
    Waypoint,
    load_scenario,
    parse_scenario,
)
from routewatch.coefficients import CoefficientVector, Weights, evaluate_route
from routewatch.safety import SafetyConfig, first_unsafe_leg, p_collide
from routewatch.prediction import Acceptability, PredictedRoute, acceptability, predict
from routewatch.development import (
    CognitiveImage,
    DevelopmentSeries,
    classify,
    render_image,
    render_svg,
)
from routewatch.decision import (
    Candidate,
    CriteriaSplit,
    dominates,
    generate_return_routes,
    select_best,
)
from routewatch.engine import EvalConfig, evaluate_at, run_whatif

__version__ = "0.1.0"

_FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a bundled scenario fixture, e.g. ``costa_concordia.json``."""
    path = _FIXTURES / name
    if not path.exists():
        available = sorted(p.name for p in _FIXTURES.glob("*.json"))
        raise FileNotFoundError(f"no bundled fixture {name!r}; available: {available}")
    return path


__all__ = [
    "Acceptability",
    "Candidate",
    "CoefficientVector",
    "CognitiveImage",
    "CriteriaSplit",
    "DevelopmentSeries",
    "DistanceModel",
    "EvalConfig",
    "GeoPoint",
    "ObstacleMap",
    "Polygon",
    "PredictedRoute",
    "Route",
    "SafetyConfig",
    "Scenario",
    "ScenarioError",
    "ShipProfile",
    "Waypoint",
    "Weights",
    "acceptability",
    "classify",
    "dominates",
    "evaluate_at",
    "evaluate_route",
    "first_unsafe_leg",
    "fixture_path",
    "generate_return_routes",
    "load_scenario",
    "p_collide",
    "parse_scenario",
    "predict",
    "render_image",
    "render_svg",
    "run_whatif",
    "select_best",
]
