"""Route-development history: trend classification and cognitive images.

The evaluation history across waypoints is classified as improving,
stable, deteriorating or mixed from its overall quality signal.  Each
coefficient vector also renders as a "cognitive image": a radial graph
with a central vertex and one vertex per coefficient, where spoke length
encodes the coefficient value, so a crew can compare routes by comparing
shapes instead of reading numbers.  Images shrinking over time mean the
route is developing toward trouble.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from routewatch.coefficients import CoefficientVector

CLASS_IMPROVING = "improving"
CLASS_STABLE = "stable"
CLASS_DETERIORATING = "deteriorating"
CLASS_MIXED = "mixed"

DEFAULT_EPSILON = 0.02

# Fixed spoke layout (degrees, math convention): S up, D right, T down, C left.
# Any layout works as long as every compared image uses the same one.
SPOKE_ANGLES = {"S": 90.0, "D": 0.0, "T": 270.0, "C": 180.0}

_SVG_UNIT_PX = 90.0
_SVG_MARGIN_PX = 30.0
_DASH_PATTERNS = ("", "7,4", "2,3", "9,3,2,3", "4,4", "12,3")


class DevelopmentError(ValueError):
    """History too short or otherwise unusable."""


@dataclass(frozen=True)
class DevelopmentSeries:
    """Time-ordered (waypoint index, coefficient vector) history."""

    entries: tuple[tuple[int, CoefficientVector], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DevelopmentError("a development series needs at least one entry")
        indices = [i for i, _ in self.entries]
        if indices != sorted(indices):
            raise DevelopmentError("series entries must be ordered by waypoint index")

    @property
    def qualities(self) -> tuple[float, ...]:
        return tuple(v.quality for _, v in self.entries)


def classify(series: DevelopmentSeries, epsilon: float = DEFAULT_EPSILON) -> str:
    """Trend of the series' quality signal.

    improving: every step gains (noise up to epsilon tolerated) and the net
    change is positive; deteriorating: net loss with at least half of the
    steps declining; stable: net change within epsilon; mixed: anything else.
    """
    qualities = series.qualities
    if len(qualities) < 2:
        raise DevelopmentError("classification needs at least two entries")
    steps = [b - a for a, b in zip(qualities, qualities[1:])]
    net = qualities[-1] - qualities[0]
    if abs(net) <= epsilon:
        return CLASS_STABLE
    if net > epsilon and all(step >= -epsilon for step in steps):
        return CLASS_IMPROVING
    declining = sum(1 for step in steps if step < 0)
    if net < -epsilon and declining * 2 >= len(steps):
        return CLASS_DETERIORATING
    return CLASS_MIXED


@dataclass(frozen=True)
class CognitiveImage:
    """Radial 4-spoke quality glyph (plus the central vertex).

    Spoke lengths are the coefficient values at a unit radius; T is clamped
    to 1 for display only.  ``area`` is the shoelace area of the
    control-point quadrilateral, the testable size measure behind "the image
    grew/shrank".
    """

    spokes: dict[str, float]
    control_points: tuple[tuple[float, float], ...]
    area: float
    t_clamped: bool

    center: tuple[float, float] = (0.0, 0.0)


def _shoelace(points: tuple[tuple[float, float], ...]) -> float:
    n = len(points)
    acc = 0.0
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return abs(acc) / 2.0


def render_image(v: CoefficientVector) -> CognitiveImage:
    """Deterministic cognitive-image geometry for one coefficient vector."""
    t_display = min(v.t, 1.0)
    spokes = {"S": v.s, "D": v.d, "T": t_display, "C": v.c}
    control_points = tuple(
        (
            length * math.cos(math.radians(SPOKE_ANGLES[name])),
            length * math.sin(math.radians(SPOKE_ANGLES[name])),
        )
        for name, length in spokes.items()
    )
    return CognitiveImage(
        spokes=spokes,
        control_points=control_points,
        area=_shoelace(control_points),
        t_clamped=v.t > 1.0,
    )


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _to_px(point: tuple[float, float], cx: float, cy: float) -> tuple[float, float]:
    # SVG y grows downward.
    return cx + point[0] * _SVG_UNIT_PX, cy - point[1] * _SVG_UNIT_PX


def _catmull_rom_path(points: list[tuple[float, float]]) -> str:
    """Closed smooth curve through the points (Catmull-Rom as cubic Beziers)."""
    n = len(points)
    parts = [f"M {_fmt(points[0][0])} {_fmt(points[0][1])}"]
    for i in range(n):
        p0 = points[(i - 1) % n]
        p1 = points[i]
        p2 = points[(i + 1) % n]
        p3 = points[(i + 2) % n]
        c1 = (p1[0] + (p2[0] - p0[0]) / 6.0, p1[1] + (p2[1] - p0[1]) / 6.0)
        c2 = (p2[0] - (p3[0] - p1[0]) / 6.0, p2[1] - (p3[1] - p1[1]) / 6.0)
        parts.append(
            f"C {_fmt(c1[0])} {_fmt(c1[1])}, {_fmt(c2[0])} {_fmt(c2[1])}, "
            f"{_fmt(p2[0])} {_fmt(p2[1])}"
        )
    parts.append("Z")
    return " ".join(parts)


def render_svg(images: list[CognitiveImage], labels: list[str]) -> str:
    """Overlaid cognitive images as a byte-deterministic SVG 1.1 document."""
    if not images:
        raise DevelopmentError("nothing to render: empty image list")
    if len(labels) != len(images):
        raise DevelopmentError(f"{len(images)} images but {len(labels)} labels")

    size = 2 * (_SVG_UNIT_PX + _SVG_MARGIN_PX)
    cx = cy = size / 2.0
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size:.0f}" height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">\n'
    )
    # Unit-radius reference ring and axes.
    out.write(
        f'  <circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(_SVG_UNIT_PX)}" '
        f'fill="none" stroke="#cccccc" stroke-width="0.5"/>\n'
    )
    for name, angle in SPOKE_ANGLES.items():
        ex, ey = _to_px(
            (math.cos(math.radians(angle)), math.sin(math.radians(angle))), cx, cy
        )
        out.write(
            f'  <line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(ex)}" y2="{_fmt(ey)}" '
            f'stroke="#dddddd" stroke-width="0.5"/>\n'
        )
        lx, ly = _to_px(
            (1.12 * math.cos(math.radians(angle)), 1.12 * math.sin(math.radians(angle))), cx, cy
        )
        out.write(
            f'  <text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="10" text-anchor="middle" '
            f'dominant-baseline="middle" fill="#555555">{name}</text>\n'
        )

    for idx, (image, label) in enumerate(zip(images, labels)):
        dash = _DASH_PATTERNS[idx % len(_DASH_PATTERNS)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        pts = [_to_px(p, cx, cy) for p in image.control_points]
        out.write(f'  <g class="route-image" data-label="{label}">\n')
        for (name, length), p in zip(image.spokes.items(), pts):
            out.write(
                f'    <line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(p[0])}" y2="{_fmt(p[1])}" '
                f'stroke="#888888" stroke-width="0.75"{dash_attr}/>\n'
            )
        out.write(
            f'    <path d="{_catmull_rom_path(pts)}" fill="none" stroke="#222222" '
            f'stroke-width="1.5"{dash_attr}/>\n'
        )
        if image.t_clamped:
            tx, ty = _to_px((0.0, -1.22), cx, cy)
            out.write(
                f'    <text x="{_fmt(tx)}" y="{_fmt(ty)}" font-size="8" text-anchor="middle" '
                f'fill="#aa3333">T&gt;1 (clamped)</text>\n'
            )
        out.write("  </g>\n")

    out.write(f'  <circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2" fill="#222222"/>\n')
    for idx, label in enumerate(labels):
        dash = _DASH_PATTERNS[idx % len(_DASH_PATTERNS)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        y = 14 + idx * 13
        out.write(
            f'  <line x1="6" y1="{y}" x2="30" y2="{y}" stroke="#222222" stroke-width="1.5"{dash_attr}/>\n'
        )
        out.write(f'  <text x="34" y="{y + 3}" font-size="9" fill="#333333">{_escape(label)}</text>\n')
    out.write("</svg>\n")
    return out.getvalue()


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def series_to_csv(series: DevelopmentSeries) -> str:
    """CSV export: waypoint, S, D, T, C, quality."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["waypoint", "S", "D", "T", "C", "quality"])
    for index, v in series.entries:
        writer.writerow([index] + [f"{x:.6f}" for x in (v.s, v.d, v.t, v.c, v.quality)])
    return buf.getvalue()
