"""Route data model: waypoints, legs, planned-vs-actual pairing, file ingestion.

Scenario files are UTF-8 JSON.  All distances are nautical miles, speeds
knots, courses degrees true, timestamps ISO-8601 UTC.  Obstacles are a
GeoJSON FeatureCollection of polygons carrying a ``kind`` property.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional

from routewatch import geo
from routewatch.geo import DistanceModel, GeoError, GeoPoint, Polygon

OBSTACLE_KINDS = ("land", "shallow", "exclusion")

# Consecutive waypoints closer than this are rejected as a zero-length leg;
# they break course derivation and waypoint-count semantics.
MIN_LEG_NMI = 1e-6

# Stated leg speeds must match timestamps to within this many seconds.
TIME_CONSISTENCY_S = 1.0


class ScenarioError(ValueError):
    """Scenario file violates the schema or a model invariant."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Waypoint:
    """A route vertex: position, ETA/ETD and the maneuver toward the next vertex.

    ``leg_*`` fields describe the edge leaving this waypoint and are absent
    on the final waypoint.  ``risk`` is an optional assumed collision
    probability annotation used by what-if fixtures.
    """

    position: GeoPoint
    eta: float  # UTC seconds
    etd: float  # UTC seconds
    leg_speed: Optional[float] = None  # knots
    leg_course: Optional[float] = None  # degrees true
    leg_distance: Optional[float] = None  # nautical miles
    name: Optional[str] = None
    risk: Optional[float] = None

    @property
    def wait_s(self) -> float:
        return self.etd - self.eta


@dataclass(frozen=True)
class Route:
    """Ordered waypoint sequence with derived legs."""

    id: str
    waypoints: tuple[Waypoint, ...]
    label: str  # planned | actual | predicted | candidate

    @property
    def length_nmi(self) -> float:
        return sum(w.leg_distance for w in self.waypoints[:-1])

    @property
    def waypoint_count(self) -> int:
        return len(self.waypoints)

    def leg(self, i: int) -> tuple[Waypoint, Waypoint]:
        return self.waypoints[i], self.waypoints[i + 1]


@dataclass(frozen=True)
class ShipProfile:
    v_max: float  # knots, calm water
    positional_sigma: float = 0.0  # nautical miles, cross-track std-dev

    def __post_init__(self) -> None:
        if self.v_max <= 0:
            raise ScenarioError("/ship/v_max_kn", f"v_max must be > 0, got {self.v_max}")
        if self.positional_sigma < 0:
            raise ScenarioError("/ship/positional_sigma_nmi", "positional_sigma must be >= 0")


@dataclass(frozen=True)
class Obstacle:
    polygon: Polygon
    kind: str
    name: str


@dataclass(frozen=True)
class ObstacleMap:
    obstacles: tuple[Obstacle, ...] = ()

    def __iter__(self):
        return iter(self.obstacles)

    def __len__(self) -> int:
        return len(self.obstacles)


@dataclass(frozen=True)
class Scenario:
    planned: Route
    actual: Route
    obstacles: ObstacleMap
    ship: ShipProfile
    correspondence: tuple[tuple[int, int], ...]
    model: DistanceModel = DistanceModel.PLANAR
    id: str = "scenario"
    notes: str = ""

    def planned_for(self, actual_index: int) -> Optional[int]:
        """Planned index paired exactly with this actual waypoint, if any."""
        for a, p in self.correspondence:
            if a == actual_index:
                return p
        return None

    def planned_leg_at(self, actual_index: int) -> Optional[int]:
        """Planned index from the last correspondence pair at or before this waypoint.

        Identifies which planned maneuver the ship is executing when the
        pairing is sparse (gaps where the crew skipped or added waypoints).
        """
        best = None
        for a, p in self.correspondence:
            if a <= actual_index:
                best = p
            else:
                break
        return best


# ---------------------------------------------------------------------------
# Timestamps
# ---------------------------------------------------------------------------


def parse_timestamp(raw: Any, path: str) -> float:
    if not isinstance(raw, str):
        raise ScenarioError(path, f"expected ISO-8601 timestamp string, got {raw!r}")
    text = raw.replace("Z", "+00:00") if raw.endswith("Z") else raw
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ScenarioError(path, f"invalid timestamp {raw!r}: {exc}") from exc
    if dt.tzinfo is None:
        raise ScenarioError(path, f"timestamp {raw!r} must carry a UTC offset")
    return dt.astimezone(timezone.utc).timestamp()


def format_timestamp(epoch_s: float) -> str:
    dt = datetime.fromtimestamp(epoch_s, tz=timezone.utc)
    if dt.microsecond == 0:
        return dt.strftime("%Y-%m-%dT%H:%M:%SZ")
    return dt.isoformat().replace("+00:00", "Z")


# ---------------------------------------------------------------------------
# Leg derivation and route validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WaypointSpec:
    """Raw waypoint data before legs are derived."""

    position: GeoPoint
    eta: float
    etd: float
    speed: Optional[float] = None
    name: Optional[str] = None
    risk: Optional[float] = None


def derive_legs(
    specs: Iterable[WaypointSpec],
    model: DistanceModel,
    route_id: str = "route",
    label: str = "planned",
    path: str = "",
) -> Route:
    """Build a validated Route from positions, times and optional speeds.

    Courses and leg distances are derived from positions; a missing speed is
    computed from the leg distance and (next eta - this etd).
    """
    specs = list(specs)
    if len(specs) < 2:
        raise ScenarioError(f"{path}/waypoints", f"route needs at least 2 waypoints, got {len(specs)}")

    waypoints: list[Waypoint] = []
    for i, spec in enumerate(specs):
        wpath = f"{path}/waypoints/{i}"
        if spec.etd < spec.eta:
            raise ScenarioError(f"{wpath}/etd", "etd must be >= eta (waiting only)")
        if spec.risk is not None and not 0.0 <= spec.risk <= 1.0:
            raise ScenarioError(f"{wpath}/risk", f"risk must be within [0, 1], got {spec.risk}")
        if i == len(specs) - 1:
            waypoints.append(
                Waypoint(spec.position, spec.eta, spec.etd, name=spec.name, risk=spec.risk)
            )
            continue

        nxt = specs[i + 1]
        if nxt.eta <= spec.eta:
            raise ScenarioError(f"{path}/waypoints/{i + 1}/eta", "ETAs must be strictly increasing")
        dist = geo.distance(spec.position, nxt.position, model)
        if dist < MIN_LEG_NMI:
            raise ScenarioError(f"{wpath}/position", "zero-length leg (identical consecutive positions)")
        course = geo.bearing(spec.position, nxt.position, model)
        duration_s = nxt.eta - spec.etd
        if spec.speed is not None:
            speed = spec.speed
            if speed <= 0:
                raise ScenarioError(f"{wpath}/speed_kn", f"leg speed must be > 0, got {speed}")
            expected_s = dist / speed * 3600.0
            if abs(duration_s - expected_s) > TIME_CONSISTENCY_S:
                raise ScenarioError(
                    f"{wpath}/speed_kn",
                    f"speed {speed} kn implies {expected_s:.1f}s for the leg "
                    f"but timestamps span {duration_s:.1f}s",
                )
        else:
            if duration_s <= 0:
                raise ScenarioError(
                    f"{wpath}/etd", "zero-duration leg with nonzero distance (infinite speed)"
                )
            speed = dist / (duration_s / 3600.0)
        waypoints.append(
            Waypoint(spec.position, spec.eta, spec.etd, speed, course, dist, spec.name, spec.risk)
        )

    return Route(route_id, tuple(waypoints), label)


def validate_route(route: Route, model: DistanceModel, path: str = "") -> None:
    """Check Route invariants (used for externally assembled routes)."""
    if len(route.waypoints) < 2:
        raise ScenarioError(f"{path}/waypoints", "route needs at least 2 waypoints")
    for i, wp in enumerate(route.waypoints[:-1]):
        nxt = route.waypoints[i + 1]
        if wp.etd < wp.eta:
            raise ScenarioError(f"{path}/waypoints/{i}/etd", "etd must be >= eta")
        if nxt.eta <= wp.eta:
            raise ScenarioError(f"{path}/waypoints/{i + 1}/eta", "ETAs must be strictly increasing")
        if wp.leg_speed is None or wp.leg_course is None or wp.leg_distance is None:
            raise ScenarioError(f"{path}/waypoints/{i}", "missing leg fields on a non-final waypoint")
        if wp.leg_speed <= 0:
            raise ScenarioError(f"{path}/waypoints/{i}", f"leg speed must be > 0, got {wp.leg_speed}")
        expected_s = wp.leg_distance / wp.leg_speed * 3600.0
        if abs((nxt.eta - wp.etd) - expected_s) > TIME_CONSISTENCY_S:
            raise ScenarioError(f"{path}/waypoints/{i}", "eta chain inconsistent with leg speed/distance")
        reproject = geo.project(wp.position, wp.leg_course, wp.leg_distance, model)
        if geo.distance(reproject, nxt.position, model) > 1e-3:
            raise ScenarioError(f"{path}/waypoints/{i}", "leg course/distance inconsistent with next position")


# ---------------------------------------------------------------------------
# Scenario parsing
# ---------------------------------------------------------------------------


def _require(doc: dict, key: str, path: str) -> Any:
    if key not in doc:
        raise ScenarioError(f"{path}/{key}", "missing required key")
    return doc[key]


def _number(value: Any, path: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    return float(value)


def _parse_waypoints(doc: Any, path: str) -> list[WaypointSpec]:
    if not isinstance(doc, dict) or not isinstance(doc.get("waypoints"), list):
        raise ScenarioError(path, "expected an object with a 'waypoints' array")
    specs = []
    for i, raw in enumerate(doc["waypoints"]):
        wpath = f"{path}/waypoints/{i}"
        if not isinstance(raw, dict):
            raise ScenarioError(wpath, "expected a waypoint object")
        try:
            position = GeoPoint(_number(_require(raw, "lat", wpath), f"{wpath}/lat"),
                                _number(_require(raw, "lon", wpath), f"{wpath}/lon"))
        except GeoError as exc:
            raise ScenarioError(wpath, str(exc)) from exc
        eta = parse_timestamp(_require(raw, "eta", wpath), f"{wpath}/eta")
        etd = parse_timestamp(raw.get("etd", raw["eta"]), f"{wpath}/etd")
        speed = None
        if raw.get("speed_kn") is not None:
            speed = _number(raw["speed_kn"], f"{wpath}/speed_kn")
        risk = None
        if raw.get("risk") is not None:
            risk = _number(raw["risk"], f"{wpath}/risk")
        specs.append(WaypointSpec(position, eta, etd, speed, raw.get("name"), risk))
    return specs


def _parse_obstacles(doc: Any, path: str) -> ObstacleMap:
    if doc is None:
        return ObstacleMap()
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ScenarioError(path, "obstacles must be a GeoJSON FeatureCollection")
    obstacles = []
    for i, feature in enumerate(doc.get("features", [])):
        fpath = f"{path}/features/{i}"
        geometry = feature.get("geometry") or {}
        if geometry.get("type") != "Polygon":
            raise ScenarioError(f"{fpath}/geometry/type", "only Polygon obstacles are supported")
        rings = geometry.get("coordinates")
        if not isinstance(rings, list) or not rings:
            raise ScenarioError(f"{fpath}/geometry/coordinates", "missing polygon coordinates")
        if len(rings) > 1:
            raise ScenarioError(f"{fpath}/geometry/coordinates", "polygon holes are not supported")
        ring = rings[0]
        if len(ring) < 4:
            raise ScenarioError(f"{fpath}/geometry/coordinates/0", "polygon ring needs >= 4 positions")
        coords = ring[:-1] if ring[0] == ring[-1] else ring
        try:
            polygon = Polygon(tuple(GeoPoint(lat, lon) for lon, lat in coords))
        except (GeoError, TypeError, ValueError) as exc:
            raise ScenarioError(f"{fpath}/geometry/coordinates/0", str(exc)) from exc
        props = feature.get("properties") or {}
        kind = props.get("kind", "land")
        if kind not in OBSTACLE_KINDS:
            raise ScenarioError(f"{fpath}/properties/kind", f"kind must be one of {OBSTACLE_KINDS}")
        obstacles.append(Obstacle(polygon, kind, props.get("name", f"obstacle-{i}")))
    return ObstacleMap(tuple(obstacles))


def _parse_correspondence(doc: Any, planned: Route, actual: Route) -> tuple[tuple[int, int], ...]:
    if doc is None:
        pairs = tuple((i, i) for i in range(min(len(actual.waypoints), len(planned.waypoints))))
    else:
        if not isinstance(doc, list):
            raise ScenarioError("/correspondence", "expected an array of [actual, planned] pairs")
        pairs = []
        for i, raw in enumerate(doc):
            if (not isinstance(raw, list)) or len(raw) != 2 or not all(isinstance(v, int) for v in raw):
                raise ScenarioError(f"/correspondence/{i}", f"expected an [actual, planned] index pair, got {raw!r}")
            a, p = raw
            if not 0 <= a < len(actual.waypoints):
                raise ScenarioError(f"/correspondence/{i}", f"actual index {a} out of range")
            if not 0 <= p < len(planned.waypoints):
                raise ScenarioError(f"/correspondence/{i}", f"planned index {p} out of range")
            pairs.append((a, p))
        pairs = tuple(pairs)
    for i in range(1, len(pairs)):
        if pairs[i][0] <= pairs[i - 1][0] or pairs[i][1] <= pairs[i - 1][1]:
            raise ScenarioError(f"/correspondence/{i}", "pairs must be strictly increasing in both coordinates")
    if not pairs or pairs[0] != (0, 0):
        raise ScenarioError("/correspondence", "first actual waypoint must correspond to first planned waypoint")
    return pairs


def parse_scenario(doc: dict) -> Scenario:
    """Validate a scenario document and derive all leg fields."""
    if not isinstance(doc, dict):
        raise ScenarioError("", "scenario document must be a JSON object")

    model_raw = doc.get("distance_model", DistanceModel.PLANAR.value)
    try:
        model = DistanceModel(model_raw)
    except ValueError:
        raise ScenarioError(
            "/distance_model",
            f"unknown distance model {model_raw!r}; expected one of "
            f"{[m.value for m in DistanceModel]}",
        ) from None

    ship_doc = _require(doc, "ship", "")
    if not isinstance(ship_doc, dict):
        raise ScenarioError("/ship", "expected an object")
    ship = ShipProfile(
        _number(_require(ship_doc, "v_max_kn", "/ship"), "/ship/v_max_kn"),
        _number(ship_doc.get("positional_sigma_nmi", 0.0), "/ship/positional_sigma_nmi"),
    )

    scenario_id = doc.get("id", "scenario")
    planned = derive_legs(
        _parse_waypoints(_require(doc, "planned", ""), "/planned"),
        model, f"{scenario_id}-planned", "planned", "/planned",
    )
    actual = derive_legs(
        _parse_waypoints(_require(doc, "actual", ""), "/actual"),
        model, f"{scenario_id}-actual", "actual", "/actual",
    )
    correspondence = _parse_correspondence(doc.get("correspondence"), planned, actual)
    obstacles = _parse_obstacles(doc.get("obstacles"), "/obstacles")

    return Scenario(
        planned=planned,
        actual=actual,
        obstacles=obstacles,
        ship=ship,
        correspondence=correspondence,
        model=model,
        id=scenario_id,
        notes=doc.get("notes", ""),
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"not valid JSON: {exc}") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# Canonical serialization (load -> serialize -> load round-trips bit-identically)
# ---------------------------------------------------------------------------


def _waypoint_to_doc(wp: Waypoint) -> dict:
    out: dict[str, Any] = {
        "lat": wp.position.lat,
        "lon": wp.position.lon,
        "eta": format_timestamp(wp.eta),
        "etd": format_timestamp(wp.etd),
    }
    if wp.leg_speed is not None:
        out["speed_kn"] = wp.leg_speed
    if wp.name is not None:
        out["name"] = wp.name
    if wp.risk is not None:
        out["risk"] = wp.risk
    return out


def scenario_to_document(scenario: Scenario) -> dict:
    """Canonical scenario document (derived speeds made explicit)."""
    doc: dict[str, Any] = {
        "id": scenario.id,
        "distance_model": scenario.model.value,
        "ship": {
            "v_max_kn": scenario.ship.v_max,
            "positional_sigma_nmi": scenario.ship.positional_sigma,
        },
        "planned": {"waypoints": [_waypoint_to_doc(w) for w in scenario.planned.waypoints]},
        "actual": {"waypoints": [_waypoint_to_doc(w) for w in scenario.actual.waypoints]},
        "correspondence": [[a, p] for a, p in scenario.correspondence],
        "obstacles": {
            "type": "FeatureCollection",
            "features": [
                {
                    "type": "Feature",
                    "properties": {"kind": ob.kind, "name": ob.name},
                    "geometry": {
                        "type": "Polygon",
                        "coordinates": [
                            [[p.lon, p.lat] for p in ob.polygon.ring]
                            + [[ob.polygon.ring[0].lon, ob.polygon.ring[0].lat]]
                        ],
                    },
                }
                for ob in scenario.obstacles
            ],
        },
    }
    if scenario.notes:
        doc["notes"] = scenario.notes
    return doc


def route_to_geojson(route: Route, provenance: Optional[list[str]] = None) -> dict:
    """Route as a GeoJSON Feature (LineString plus waypoint properties)."""
    props: dict[str, Any] = {
        "id": route.id,
        "label": route.label,
        "waypoints": [
            {
                "eta": format_timestamp(w.eta),
                "etd": format_timestamp(w.etd),
                "name": w.name,
                **({"provenance": provenance[i]} if provenance else {}),
            }
            for i, w in enumerate(route.waypoints)
        ],
    }
    return {
        "type": "Feature",
        "properties": props,
        "geometry": {
            "type": "LineString",
            "coordinates": [[w.position.lon, w.position.lat] for w in route.waypoints],
        },
    }


def extend_actual(
    scenario: Scenario,
    new_waypoint: WaypointSpec,
    planned_index: int,
) -> Scenario:
    """New scenario with one more sailed waypoint appended to the actual route.

    The appended leg's speed is recomputed from its true distance and the
    timestamps, and the correspondence gains the (new actual, planned) pair.
    """
    specs = [
        WaypointSpec(w.position, w.eta, w.etd, w.leg_speed, w.name, w.risk)
        for w in scenario.actual.waypoints
    ]
    # The formerly final waypoint gets a leg now; let derive_legs compute its speed.
    specs[-1] = replace(specs[-1], speed=None)
    specs.append(new_waypoint)
    actual = derive_legs(specs, scenario.model, scenario.actual.id, "actual", "/actual")
    correspondence = scenario.correspondence + (((len(specs) - 1), planned_index),)
    return replace(scenario, actual=actual, correspondence=correspondence)
