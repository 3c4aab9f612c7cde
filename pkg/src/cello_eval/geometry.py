"""Oriented-bounding-box math and bow/string posture classification.

Boxes live in normalized image coordinates (y axis pointing down).
theta_deg is the major-axis rotation from the image x-axis, kept in
[-90, 90) with w >= h (canonical form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BadConfig, NotIntersecting, ParallelAxes

PARALLEL_EPS_DEG = 2.0


@dataclass(frozen=True)
class OrientedBox:
    cx: float
    cy: float
    w: float
    h: float
    theta_deg: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box extents must be positive, got w={self.w} h={self.h}")
        w, h, theta = self.w, self.h, self.theta_deg
        if w < h:
            w, h = h, w
            theta += 90.0
        if not (-90.0 <= theta < 90.0):  # keep in-range values bit-exact
            theta = ((theta + 90.0) % 180.0) - 90.0
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "theta_deg", theta)

    def axis(self) -> tuple[float, float]:
        """Unit vector along the major axis."""
        t = math.radians(self.theta_deg)
        return (math.cos(t), math.sin(t))


class BowHeight(Enum):
    TOO_HIGH = "too_high"
    TOO_LOW = "too_low"
    OK = "ok"
    NOT_APPLICABLE = "not_applicable"


class BowAngle(Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class BowAssessment:
    in_zone: bool
    height: BowHeight
    angle: BowAngle
    zone_position: float | None = None
    deviation_deg: float | None = None


@dataclass(frozen=True)
class BowConfig:
    angle_tolerance_deg: float = 10.0
    low_threshold: float = 0.15
    high_threshold: float = 0.85

    def __post_init__(self):
        if not (0.0 < self.low_threshold < self.high_threshold < 1.0):
            raise BadConfig(
                f"need 0 < low_threshold < high_threshold < 1, got "
                f"{self.low_threshold}/{self.high_threshold}"
            )
        if not (0.0 < self.angle_tolerance_deg < 45.0):
            raise BadConfig(f"angle_tolerance_deg must be in (0, 45), got {self.angle_tolerance_deg}")


def obb_corners(box: OrientedBox) -> list[tuple[float, float]]:
    """Corner points in counterclockwise order."""
    ux, uy = box.axis()
    vx, vy = -uy, ux
    a, b = box.w / 2.0, box.h / 2.0
    cx, cy = box.cx, box.cy
    return [
        (cx - a * ux - b * vx, cy - a * uy - b * vy),
        (cx + a * ux - b * vx, cy + a * uy - b * vy),
        (cx + a * ux + b * vx, cy + a * uy + b * vy),
        (cx - a * ux + b * vx, cy - a * uy + b * vy),
    ]


def _projection_gap(a: OrientedBox, b: OrientedBox, axis: tuple[float, float]) -> float:
    """Signed gap between the projections of a and b onto axis.

    Positive means separated along this axis; negative is the overlap depth.
    """
    ax, ay = axis
    ca = [x * ax + y * ay for x, y in obb_corners(a)]
    cb = [x * ax + y * ay for x, y in obb_corners(b)]
    return max(min(cb) - max(ca), min(ca) - max(cb))


def _sat_margin(a: OrientedBox, b: OrientedBox) -> float:
    """Max projection gap over the four edge normals of both boxes.

    > 0: separated. <= 0: overlapping (boundary contact gives exactly 0).
    """
    axes = []
    for box in (a, b):
        ux, uy = box.axis()
        axes.append((ux, uy))
        axes.append((-uy, ux))
    return max(_projection_gap(a, b, axis) for axis in axes)


def obb_intersects(a: OrientedBox, b: OrientedBox) -> bool:
    """Closed-rectangle overlap via the separating-axis test."""
    return _sat_margin(a, b) <= 0.0


def axis_angle_between(a: OrientedBox, b: OrientedBox) -> float:
    """Acute angle between major axes, in [0, 90] degrees."""
    d = abs(a.theta_deg - b.theta_deg) % 180.0
    return min(d, 180.0 - d)


def _zone_endpoints(strings: OrientedBox) -> tuple[tuple[float, float], tuple[float, float]]:
    """(bridge_end, fingerboard_end) of the string-zone major axis.

    The fingerboard end is the endpoint higher on screen (smaller image y);
    ties broken by smaller x.
    """
    ux, uy = strings.axis()
    half = strings.w / 2.0
    p1 = (strings.cx - half * ux, strings.cy - half * uy)
    p2 = (strings.cx + half * ux, strings.cy + half * uy)
    if (p1[1], p1[0]) < (p2[1], p2[0]):
        return p2, p1
    return p1, p2


def zone_position(bow: OrientedBox, strings: OrientedBox) -> float:
    """Fraction along the string-zone axis where the bow centerline crosses.

    0 is the bridge end, 1 the fingerboard end. Raises ParallelAxes when the
    two major axes are within 2 degrees of parallel (crossing ill-conditioned)
    and NotIntersecting when the boxes do not overlap.
    """
    if not obb_intersects(bow, strings):
        raise NotIntersecting("bow and string boxes do not overlap")
    if axis_angle_between(bow, strings) < PARALLEL_EPS_DEG:
        raise ParallelAxes("bow axis nearly parallel to string-zone axis")
    bridge, finger = _zone_endpoints(strings)
    dx, dy = finger[0] - bridge[0], finger[1] - bridge[1]
    bx, by = bow.axis()
    # Solve bridge + p*(finger-bridge) == bow_center + t*bow_axis.
    det = dx * (-by) - (-bx) * dy
    rx, ry = bow.cx - bridge[0], bow.cy - bridge[1]
    p = (rx * (-by) - (-bx) * ry) / det
    return min(max(p, 0.0), 1.0)


def _projected_position(bow: OrientedBox, strings: OrientedBox) -> float:
    """Fallback for near-parallel axes: project the bow center onto the zone axis."""
    bridge, finger = _zone_endpoints(strings)
    dx, dy = finger[0] - bridge[0], finger[1] - bridge[1]
    length_sq = dx * dx + dy * dy
    p = ((bow.cx - bridge[0]) * dx + (bow.cy - bridge[1]) * dy) / length_sq
    return min(max(p, 0.0), 1.0)


def classify_bow(
    bow: OrientedBox | None,
    strings: OrientedBox | None,
    cfg: BowConfig,
) -> BowAssessment:
    """Full bow posture verdict: zone membership, height band, angle band."""
    if bow is None or strings is None or not obb_intersects(bow, strings):
        return BowAssessment(
            in_zone=False,
            height=BowHeight.NOT_APPLICABLE,
            angle=BowAngle.NOT_APPLICABLE,
        )
    deviation = abs(90.0 - axis_angle_between(bow, strings))
    angle = BowAngle.CORRECT if deviation <= cfg.angle_tolerance_deg else BowAngle.INCORRECT
    try:
        p = zone_position(bow, strings)
    except ParallelAxes:
        p = _projected_position(bow, strings)
    if p < cfg.low_threshold:
        height = BowHeight.TOO_LOW
    elif p > cfg.high_threshold:
        height = BowHeight.TOO_HIGH
    else:
        height = BowHeight.OK
    return BowAssessment(
        in_zone=True,
        height=height,
        angle=angle,
        zone_position=p,
        deviation_deg=deviation,
    )
