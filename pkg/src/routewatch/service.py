"""HTTP voyage-session service (JSON; mutating calls limited to /advance).

Sessions hold a scenario, a cursor over the sailed route, and the
evaluation history.  Advancing replays the next planned maneuver from the
ship's current position, optionally displaced by an injected deviation or
replaced by an explicit waypoint, then re-evaluates the forecast.  All
other endpoints are pure reads of session state; per-session mutation is
serialized by a lock, so concurrent advances apply in arrival order.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from routewatch import geo
from routewatch.coefficients import CoefficientVector, Weights
from routewatch.decision import DecisionError
from routewatch.development import (
    DevelopmentSeries,
    classify,
    render_image,
    render_svg,
    series_to_csv,
)
from routewatch.engine import EvalConfig, Evaluation, evaluate_at, run_whatif
from routewatch.prediction import PredictionError
from routewatch.route_model import (
    Scenario,
    ScenarioError,
    WaypointSpec,
    extend_actual,
    parse_scenario,
    parse_timestamp,
    route_to_geojson,
    scenario_to_document,
)
from routewatch.safety import SafetyConfig


class SafetyConfigModel(BaseModel):
    mode: str = "deterministic"
    samples: int = 10000
    sigma: Optional[float] = None
    rng_seed: Optional[int] = None


class SessionConfigModel(BaseModel):
    weights: Optional[list[float]] = Field(default=None, min_length=4, max_length=4)
    thresholds: Optional[dict[str, float]] = None
    safety: SafetyConfigModel = Field(default_factory=SafetyConfigModel)


class CreateSessionRequest(BaseModel):
    scenario: dict
    config: SessionConfigModel = Field(default_factory=SessionConfigModel)
    initial_cursor: Optional[int] = None  # restore point; defaults to the last sailed waypoint


class DeviationModel(BaseModel):
    offset_nmi: float
    bearing_deg: float


class WaypointOverrideModel(BaseModel):
    lat: float
    lon: float
    eta: Optional[str] = None
    etd: Optional[str] = None


class AdvanceRequest(BaseModel):
    deviation: Optional[DeviationModel] = None
    waypoint: Optional[WaypointOverrideModel] = None


class WhatifRequest(BaseModel):
    turn_points: list[int]


@dataclass
class Session:
    id: str
    scenario: Scenario
    cursor: int
    config: EvalConfig
    config_model: SessionConfigModel
    initial_cursor: int
    history: list[tuple[int, CoefficientVector]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def classification(self) -> Optional[str]:
        if len(self.history) < 2:
            return None
        return classify(DevelopmentSeries(tuple(self.history)))


def _vector_json(v: CoefficientVector) -> dict:
    return v.as_dict()


def _evaluation_json(session: Session, result: Evaluation) -> dict:
    return {
        "cursor": session.cursor,
        "planned_vector": _vector_json(result.planned_vector),
        "composite_vector": _vector_json(result.composite_vector),
        "acceptability": {
            "acceptable": result.acceptability.acceptable,
            "reasons": list(result.acceptability.reasons),
        },
        "first_unsafe_leg": result.first_unsafe_leg,
        "classification": session.classification(),
        "history": [
            {"cursor": cursor, "vector": _vector_json(vector)} for cursor, vector in session.history
        ],
    }


def create_app(default_seed: int = 0) -> FastAPI:
    app = FastAPI(title="routewatch", version="0.1.0")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    ids = itertools.count(1)

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    def build_config(model: SessionConfigModel) -> EvalConfig:
        try:
            weights = Weights(*model.weights) if model.weights else Weights()
            safety = SafetyConfig(
                mode=model.safety.mode,
                samples=model.safety.samples,
                sigma=model.safety.sigma,
                rng_seed=model.safety.rng_seed if model.safety.rng_seed is not None else default_seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return EvalConfig(weights=weights, thresholds=model.thresholds, safety=safety)

    @app.post("/sessions")
    def create_session(request: CreateSessionRequest) -> dict:
        try:
            scenario = parse_scenario(request.scenario)
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail={"path": exc.path, "message": exc.message}) from exc
        config = build_config(request.config)
        cursor = len(scenario.actual.waypoints) - 1
        initial = request.initial_cursor if request.initial_cursor is not None else cursor
        if not 0 <= initial <= cursor:
            raise HTTPException(status_code=422, detail=f"initial_cursor must be within [0, {cursor}]")
        session = Session(f"session-{next(ids)}", scenario, cursor, config, request.config, initial)
        # Forecasts at cursor k only read the sailed prefix up to k, so a
        # restored session can rebuild its per-waypoint history verbatim.
        try:
            for k in range(initial, cursor + 1):
                session.history.append((k, evaluate_at(scenario, k, config).composite_vector))
        except (PredictionError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        with registry_lock:
            sessions[session.id] = session
        return {"session_id": session.id, "cursor": cursor}

    @app.get("/sessions/{session_id}/snapshot")
    def snapshot(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {
                "scenario": scenario_to_document(session.scenario),
                "config": session.config_model.model_dump(),
                "initial_cursor": session.initial_cursor,
            }

    @app.get("/sessions/{session_id}/state")
    def state(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            result = evaluate_at(session.scenario, session.cursor, session.config)
            return _evaluation_json(session, result)

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, request: AdvanceRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            scenario = session.scenario
            cursor = session.cursor
            planned_idx = scenario.planned_for(cursor)
            if planned_idx is None:
                raise HTTPException(status_code=409, detail=f"no planned counterpart for waypoint {cursor}")
            if planned_idx >= len(scenario.planned.waypoints) - 1:
                raise HTTPException(status_code=409, detail="already at the destination")

            try:
                nominal = evaluate_at(scenario, cursor, session.config).prediction.composite.waypoints[cursor + 1]
            except (PredictionError, ValueError) as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc

            if request.deviation is not None and request.waypoint is not None:
                raise HTTPException(status_code=422, detail="provide either a deviation or a waypoint, not both")

            if request.waypoint is not None:
                wp = request.waypoint
                try:
                    position = geo.GeoPoint(wp.lat, wp.lon)
                    eta = nominal.eta if wp.eta is None else parse_timestamp(wp.eta, "/waypoint/eta")
                    etd = eta if wp.etd is None else parse_timestamp(wp.etd, "/waypoint/etd")
                except (geo.GeoError, ScenarioError) as exc:
                    raise HTTPException(status_code=422, detail=str(exc)) from exc
            else:
                position, eta, etd = nominal.position, nominal.eta, nominal.etd
                if request.deviation is not None:
                    dev = request.deviation
                    if (
                        not math.isfinite(dev.offset_nmi)
                        or not math.isfinite(dev.bearing_deg)
                        or dev.offset_nmi < 0
                        or not 0.0 <= dev.bearing_deg <= 360.0
                    ):
                        raise HTTPException(
                            status_code=422,
                            detail="deviation needs offset_nmi >= 0 and bearing_deg within [0, 360]",
                        )
                    position = geo.project(position, dev.bearing_deg, dev.offset_nmi, scenario.model)

            spec = WaypointSpec(position, eta, etd)
            try:
                new_scenario = extend_actual(scenario, spec, planned_idx + 1)
            except ScenarioError as exc:
                raise HTTPException(status_code=422, detail={"path": exc.path, "message": exc.message}) from exc

            new_cursor = cursor + 1
            try:
                result = evaluate_at(new_scenario, new_cursor, session.config)
            except (PredictionError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc

            session.scenario = new_scenario
            session.cursor = new_cursor
            session.history.append((new_cursor, result.composite_vector))
            return _evaluation_json(session, result)

    @app.get("/sessions/{session_id}/prediction")
    def prediction(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            scenario = session.scenario
            result = evaluate_at(scenario, session.cursor, session.config)
            features = [
                route_to_geojson(scenario.planned),
                route_to_geojson(result.prediction.composite, list(result.prediction.provenance)),
            ]
            for obstacle in scenario.obstacles:
                ring = [[p.lon, p.lat] for p in obstacle.polygon.ring]
                ring.append(ring[0])
                features.append(
                    {
                        "type": "Feature",
                        "properties": {"kind": obstacle.kind, "name": obstacle.name, "label": "obstacle"},
                        "geometry": {"type": "Polygon", "coordinates": [ring]},
                    }
                )
            return {
                "route": {"type": "FeatureCollection", "features": features},
                "vector": _vector_json(result.composite_vector),
                "acceptability": {
                    "acceptable": result.acceptability.acceptable,
                    "reasons": list(result.acceptability.reasons),
                },
                "first_unsafe_leg": result.first_unsafe_leg,
                "split_index": result.prediction.split_index,
            }

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, request: WhatifRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            try:
                result = run_whatif(
                    session.scenario, request.turn_points, session.config, sailed_through=session.cursor
                )
            except (DecisionError, PredictionError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            return {
                "planned": {
                    "route_id": result.planned.route.id,
                    "vector": _vector_json(result.planned.vector),
                    "route": route_to_geojson(result.planned.route),
                },
                "candidates": [
                    {
                        "turn_point": c.turn_point,
                        "route_id": c.route.id,
                        "waypoints": c.route.waypoint_count,
                        "vector": _vector_json(c.vector),
                        "route": route_to_geojson(c.route),
                    }
                    for c in result.candidates
                ],
                "classification": result.classification,
                "winner": result.winner_id,
            }

    @app.get("/sessions/{session_id}/image.svg")
    def image(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            result = evaluate_at(session.scenario, session.cursor, session.config)
            svg = render_svg(
                [render_image(result.planned_vector), render_image(result.composite_vector)],
                ["planned", "composite"],
            )
            return Response(content=svg, media_type="image/svg+xml")

    @app.get("/sessions/{session_id}/history.csv")
    def history_csv(session_id: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            csv_text = series_to_csv(DevelopmentSeries(tuple(session.history)))
            return Response(content=csv_text, media_type="text/csv")

    return app
