"""Command-line interface: batch evaluation, what-if tables, HTTP service.

Exit codes: 0 on success, 1 on bad input (schema violations print the
offending JSON path), 2 when the forecast advises plotting a new route
(reasons go to stderr).
"""

from __future__ import annotations

import json
import sys

import click

from routewatch.coefficients import CoefficientVector, Weights
from routewatch.decision import DecisionError
from routewatch.development import render_image, render_svg
from routewatch.engine import EvalConfig, evaluate_at, run_whatif
from routewatch.geo import GeoError
from routewatch.prediction import PredictionError
from routewatch.route_model import Scenario, ScenarioError, load_scenario
from routewatch.safety import MODE_DETERMINISTIC, MODE_MONTE_CARLO, SafetyConfig


def _parse_weights(raw: str | None) -> Weights:
    if raw is None:
        return Weights()
    parts = raw.split(",")
    if len(parts) != 4:
        raise click.BadParameter("expected four comma-separated weights, e.g. 1,1,1,1")
    try:
        return Weights(*(float(p) for p in parts))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _eval_config(weights, safety_mode, samples, sigma, seed) -> EvalConfig:
    safety = SafetyConfig(mode=safety_mode, samples=samples, sigma=sigma, rng_seed=seed)
    return EvalConfig(weights=_parse_weights(weights), safety=safety)


def _vector_csv(v: CoefficientVector) -> str:
    return "S,D,T,C,quality\n" + ",".join(f"{x:.6f}" for x in (v.s, v.d, v.t, v.c, v.quality))


safety_options = [
    click.option(
        "--safety-mode",
        type=click.Choice([MODE_DETERMINISTIC, MODE_MONTE_CARLO]),
        default=MODE_DETERMINISTIC,
        show_default=True,
        help="Collision probability estimator.",
    ),
    click.option("--samples", type=int, default=10000, show_default=True, help="Monte-Carlo sample count."),
    click.option("--sigma", type=float, default=None, help="Cross-track std-dev in nmi (defaults to the ship profile)."),
    click.option("--seed", type=int, default=0, show_default=True, help="Random seed for the Monte-Carlo estimator."),
    click.option("--weights", type=str, default=None, help="Coefficient weights as S,D,T,C (default 1,1,1,1)."),
]


def with_safety_options(fn):
    for option in reversed(safety_options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Validate a voyage: score routes, forecast drift, compare return routes."""


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--at", "at_index", type=int, default=None, help="Actual waypoint cursor (default: last sailed).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@with_safety_options
def evaluate(scenario_file, at_index, fmt, safety_mode, samples, sigma, seed, weights) -> None:
    """Score the composite route (sailed prefix plus forecast) at a cursor."""
    scenario = _load(scenario_file)
    cfg = _eval_config(weights, safety_mode, samples, sigma, seed)
    at = at_index if at_index is not None else len(scenario.actual.waypoints) - 1
    try:
        result = evaluate_at(scenario, at, cfg)
    except (PredictionError, GeoError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if fmt == "csv":
        click.echo(_vector_csv(result.composite_vector))
    else:
        click.echo(
            json.dumps(
                {
                    "at": result.at,
                    "vector": result.composite_vector.as_dict(),
                    "planned": result.planned_vector.as_dict(),
                    "acceptable": result.acceptability.acceptable,
                    "reasons": list(result.acceptability.reasons),
                    "first_unsafe_leg": result.first_unsafe_leg,
                },
                sort_keys=True,
            )
        )
    if not result.acceptability.acceptable:
        click.echo("replan advised: " + ", ".join(result.acceptability.reasons), err=True)
        sys.exit(2)


@main.command()
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--turns", required=True, help="Comma-separated actual waypoint indices to turn back at.")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None, help="Write overlaid quality glyphs here.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@with_safety_options
def whatif(scenario_file, turns, svg_path, fmt, safety_mode, samples, sigma, seed, weights) -> None:
    """Evaluate return routes for the given turn points, oldest first."""
    scenario = _load(scenario_file)
    cfg = _eval_config(weights, safety_mode, samples, sigma, seed)
    try:
        turn_points = [int(t) for t in turns.split(",") if t.strip() != ""]
    except ValueError:
        click.echo(f"error: --turns must be comma-separated integers, got {turns!r}", err=True)
        sys.exit(1)
    try:
        result = run_whatif(scenario, turn_points, cfg)
    except (DecisionError, PredictionError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if fmt == "json":
        click.echo(
            json.dumps(
                {
                    "planned": {"route_id": result.planned.route.id, "vector": result.planned.vector.as_dict()},
                    "candidates": [
                        {
                            "turn_point": c.turn_point,
                            "route_id": c.route.id,
                            "waypoints": c.route.waypoint_count,
                            "vector": c.vector.as_dict(),
                        }
                        for c in result.candidates
                    ],
                    "classification": result.classification,
                    "selected": result.winner_id,
                },
                sort_keys=True,
            )
        )
    else:
        click.echo("turn_point,route_id,waypoints,S,D,T,C,quality")
        for c in result.candidates:
            v = c.vector
            click.echo(
                f"{c.turn_point},{c.route.id},{c.route.waypoint_count},"
                + ",".join(f"{x:.6f}" for x in (v.s, v.d, v.t, v.c, v.quality))
            )
        click.echo(f"classification: {result.classification}")
        click.echo(f"selected: {result.winner_id}")

    if svg_path:
        images = [render_image(result.planned.vector)] + [render_image(c.vector) for c in result.candidates]
        labels = ["planned"] + [f"turn@{c.turn_point}" for c in result.candidates]
        with open(svg_path, "w", encoding="utf-8") as fh:
            fh.write(render_svg(images, labels))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None, help="Port (default: $PORT or 8080).")
@click.option("--seed", type=int, default=0, show_default=True, help="Default Monte-Carlo seed for sessions.")
def serve(host, port, seed) -> None:
    """Run the HTTP voyage-session service."""
    import os

    import uvicorn

    from routewatch.service import create_app

    if port is None:
        port = int(os.environ.get("PORT", "8080"))
    uvicorn.run(create_app(default_seed=seed), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
