"""Geographic primitives: points, polygons, distance, projection, intersection.

Two distance models are supported and selected per scenario:

* ``planar-local``: positions are treated as a flat grid where one degree
  equals 60 nautical miles on both axes.  Exact vector arithmetic (useful
  for synthetic scenarios and small coastal spans); documented
  approximation, only meant for spans well under ~200 nmi.
* ``great-circle``: spherical haversine / dead-reckoning on a sphere of
  radius 3440.065 nmi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

EARTH_RADIUS_NMI = 3440.065
NMI_PER_DEGREE = 60.0

# Segments passing closer than this to a polygon boundary count as touching.
INTERSECT_TOL_NMI = 1e-6


class GeoError(ValueError):
    """Invalid geometry (bad coordinates, degenerate polygon, ...)."""


class DistanceModel(str, Enum):
    PLANAR = "planar-local"
    GREAT_CIRCLE = "great-circle"


def _normalize_lon(lon: float) -> float:
    """Wrap longitude into [-180, 180)."""
    wrapped = math.fmod(lon + 180.0, 360.0)
    if wrapped < 0:
        wrapped += 360.0
    return wrapped - 180.0


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude position in degrees (lon normalized to [-180, 180))."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lat) or not math.isfinite(self.lon):
            raise GeoError(f"non-finite coordinates: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise GeoError(f"latitude out of range [-90, 90]: {self.lat}")
        object.__setattr__(self, "lon", _normalize_lon(self.lon))


def _wrap_dlon(dlon: float) -> float:
    """Shortest signed longitude difference in degrees."""
    return _normalize_lon(dlon)


def distance(a: GeoPoint, b: GeoPoint, model: DistanceModel) -> float:
    """Distance between two points in nautical miles under the given model."""
    if model is DistanceModel.PLANAR:
        dy = (b.lat - a.lat) * NMI_PER_DEGREE
        dx = _wrap_dlon(b.lon - a.lon) * NMI_PER_DEGREE
        return math.hypot(dx, dy)
    phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
    dphi = phi2 - phi1
    dlmb = math.radians(_wrap_dlon(b.lon - a.lon))
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2.0 * EARTH_RADIUS_NMI * math.asin(min(1.0, math.sqrt(h)))


def bearing(a: GeoPoint, b: GeoPoint, model: DistanceModel) -> float:
    """Initial course from a to b, degrees true in [0, 360)."""
    if model is DistanceModel.PLANAR:
        dy = b.lat - a.lat
        dx = _wrap_dlon(b.lon - a.lon)
        theta = math.degrees(math.atan2(dx, dy))
    else:
        phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
        dlmb = math.radians(_wrap_dlon(b.lon - a.lon))
        y = math.sin(dlmb) * math.cos(phi2)
        x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlmb)
        theta = math.degrees(math.atan2(y, x))
    return theta % 360.0


def project(origin: GeoPoint, course_deg: float, dist_nmi: float, model: DistanceModel) -> GeoPoint:
    """Dead-reckon from origin along a course (degrees true, 0=N, 90=E).

    Inverse of :func:`distance`/:func:`bearing` within 1e-6 nmi (planar)
    or 1e-3 nmi (great-circle).
    """
    if dist_nmi < 0:
        raise GeoError(f"projection distance must be >= 0, got {dist_nmi}")
    return displace(origin, course_deg, dist_nmi, model)


def displace(origin: GeoPoint, course_deg: float, signed_dist_nmi: float, model: DistanceModel) -> GeoPoint:
    """Like project but accepts signed distances (negative moves backwards)."""
    if signed_dist_nmi == 0.0:
        return origin
    theta = math.radians(course_deg)
    if model is DistanceModel.PLANAR:
        dlat = signed_dist_nmi * math.cos(theta) / NMI_PER_DEGREE
        dlon = signed_dist_nmi * math.sin(theta) / NMI_PER_DEGREE
        return GeoPoint(origin.lat + dlat, origin.lon + dlon)
    if signed_dist_nmi < 0:
        theta += math.pi
        signed_dist_nmi = -signed_dist_nmi
    delta = signed_dist_nmi / EARTH_RADIUS_NMI
    phi1 = math.radians(origin.lat)
    lmb1 = math.radians(origin.lon)
    sin_phi2 = math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    sin_phi2 = max(-1.0, min(1.0, sin_phi2))
    phi2 = math.asin(sin_phi2)
    lmb2 = lmb1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * sin_phi2,
    )
    return GeoPoint(math.degrees(phi2), math.degrees(lmb2))


# ---------------------------------------------------------------------------
# Polygons and segment intersection.
#
# Intersection tests run in a local equirectangular frame (nmi) anchored at
# the segment midpoint; crossing results are invariant to the per-axis scale,
# the frame only serves to express tolerances in nautical miles.
# ---------------------------------------------------------------------------

_XY = tuple[float, float]


def _to_local(p: GeoPoint, anchor: GeoPoint, cos_lat0: float) -> _XY:
    x = _wrap_dlon(p.lon - anchor.lon) * NMI_PER_DEGREE * cos_lat0
    y = (p.lat - anchor.lat) * NMI_PER_DEGREE
    return (x, y)


def _cross(o: _XY, a: _XY, b: _XY) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _point_segment_dist(p: _XY, a: _XY, b: _XY) -> float:
    ax, ay = a
    abx, aby = b[0] - a[0], b[1] - a[1]
    apx, apy = p[0] - ax, p[1] - ay
    denom = abx * abx + aby * aby
    if denom == 0.0:
        return math.hypot(apx, apy)
    t = max(0.0, min(1.0, (apx * abx + apy * aby) / denom))
    return math.hypot(p[0] - (ax + t * abx), p[1] - (ay + t * aby))


def _segments_properly_cross(a: _XY, b: _XY, c: _XY, d: _XY) -> bool:
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _segment_segment_dist(a: _XY, b: _XY, c: _XY, d: _XY) -> float:
    if _segments_properly_cross(a, b, c, d):
        return 0.0
    return min(
        _point_segment_dist(a, c, d),
        _point_segment_dist(b, c, d),
        _point_segment_dist(c, a, b),
        _point_segment_dist(d, a, b),
    )


def _point_in_ring(p: _XY, ring: list[_XY]) -> bool:
    x, y = p
    inside = False
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xing = (x2 - x1) * (y - y1) / (y2 - y1) + x1
            if x < xing:
                inside = not inside
    return inside


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given as an ordered ring of vertices, implicitly closed."""

    ring: tuple[GeoPoint, ...]

    def __post_init__(self) -> None:
        if len(self.ring) < 3:
            raise GeoError(f"polygon needs at least 3 vertices, got {len(self.ring)}")
        first, last = self.ring[0], self.ring[-1]
        if abs(first.lat - last.lat) < 1e-12 and abs(first.lon - last.lon) < 1e-12:
            raise GeoError("polygon ring must not repeat the first vertex (closure is implicit)")
        if self._self_intersects():
            raise GeoError("polygon ring is self-intersecting")

    def _self_intersects(self) -> bool:
        anchor = self.ring[0]
        cos0 = math.cos(math.radians(anchor.lat))
        pts = [_to_local(p, anchor, cos0) for p in self.ring]
        n = len(pts)
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # adjacent edges share a vertex
                c, d = pts[j], pts[(j + 1) % n]
                if _segments_properly_cross(a, b, c, d):
                    return True
        return False


def point_in_polygon(p: GeoPoint, poly: Polygon) -> bool:
    """True if p lies inside the polygon (boundary within tolerance counts)."""
    anchor = p
    cos0 = math.cos(math.radians(anchor.lat))
    pp = _to_local(p, anchor, cos0)
    ring = [_to_local(v, anchor, cos0) for v in poly.ring]
    n = len(ring)
    for i in range(n):
        if _point_segment_dist(pp, ring[i], ring[(i + 1) % n]) <= INTERSECT_TOL_NMI:
            return True
    return _point_in_ring(pp, ring)


def segment_intersects(a: GeoPoint, b: GeoPoint, poly: Polygon, tol_nmi: float = INTERSECT_TOL_NMI) -> bool:
    """True iff segment a-b touches the polygon.

    Counts boundary crossings, either endpoint inside, and conservatively
    anything passing within tol_nmi of the boundary.
    """
    anchor = GeoPoint((a.lat + b.lat) / 2.0, a.lon + _wrap_dlon(b.lon - a.lon) / 2.0)
    cos0 = math.cos(math.radians(anchor.lat))
    pa = _to_local(a, anchor, cos0)
    pb = _to_local(b, anchor, cos0)
    ring = [_to_local(v, anchor, cos0) for v in poly.ring]
    n = len(ring)
    for i in range(n):
        if _segment_segment_dist(pa, pb, ring[i], ring[(i + 1) % n]) <= tol_nmi:
            return True
    return _point_in_ring(pa, ring) or _point_in_ring(pb, ring)
