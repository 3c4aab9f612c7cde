"""Frame-stream data model and its line-delimited JSON serialization.

One frame per line: `{"t_ms": int, "hand": [[x,y]*21]|null, "pose":
{"shoulder":[x,y,z],"elbow":[x,y,z],"wrist":[x,y,z]}|null, "bow": obb|null,
"strings": obb|null}` with obb = {"cx","cy","w","h","theta_deg"}.

Detectors may place landmarks slightly outside the image; any coordinate in
[-0.5, 1.5] is accepted, anything further is treated as corrupt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterator

from .errors import MalformedRecord, NonMonotonicTimestamp, OutOfRange
from .geometry import OrientedBox

HAND_POINTS = 21
COORD_MIN = -0.5
COORD_MAX = 1.5


@dataclass(frozen=True)
class PoseTriplet:
    shoulder: tuple[float, float, float]
    elbow: tuple[float, float, float]
    wrist: tuple[float, float, float]

    def is_degenerate(self) -> bool:
        return (
            self.shoulder == self.elbow
            or self.elbow == self.wrist
            or self.shoulder == self.wrist
        )


@dataclass(frozen=True)
class FramePacket:
    t_ms: int
    hand: tuple[tuple[float, float], ...] | None = None
    pose: PoseTriplet | None = None
    bow: OrientedBox | None = None
    strings: OrientedBox | None = None


def _check_coord(value, what: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise MalformedRecord(f"{what}: expected a number, got {value!r}")
    v = float(value)
    if v != v or not (COORD_MIN <= v <= COORD_MAX):
        raise OutOfRange(f"{what}: coordinate {v} outside [{COORD_MIN}, {COORD_MAX}]")
    return v


def _parse_point(raw, n: int, what: str) -> tuple[float, ...]:
    if not isinstance(raw, list) or len(raw) != n:
        raise MalformedRecord(f"{what}: expected {n} coordinates")
    return tuple(_check_coord(c, what) for c in raw)


def _parse_box(raw, what: str) -> OrientedBox:
    if not isinstance(raw, dict):
        raise MalformedRecord(f"{what}: expected an object")
    missing = {"cx", "cy", "w", "h", "theta_deg"} - raw.keys()
    if missing:
        raise MalformedRecord(f"{what}: missing fields {sorted(missing)}")
    cx = _check_coord(raw["cx"], f"{what}.cx")
    cy = _check_coord(raw["cy"], f"{what}.cy")
    for key in ("w", "h", "theta_deg"):
        v = raw[key]
        if not isinstance(v, (int, float)) or isinstance(v, bool) or v != v:
            raise MalformedRecord(f"{what}.{key}: expected a number, got {v!r}")
    if not (0 < raw["w"] <= 2 and 0 < raw["h"] <= 2):
        raise OutOfRange(f"{what}: extents must be in (0, 2]")
    return OrientedBox(cx, cy, float(raw["w"]), float(raw["h"]), float(raw["theta_deg"]))


def parse_frame_line(text: str) -> FramePacket:
    """Parse and validate one serialized frame record."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise MalformedRecord("record must be an object")

    t_ms = raw.get("t_ms")
    if not isinstance(t_ms, int) or isinstance(t_ms, bool) or t_ms < 0:
        raise MalformedRecord(f"t_ms must be a non-negative integer, got {t_ms!r}")

    hand = None
    if raw.get("hand") is not None:
        pts = raw["hand"]
        if not isinstance(pts, list) or len(pts) != HAND_POINTS:
            raise MalformedRecord(
                f"hand must have exactly {HAND_POINTS} points, got "
                f"{len(pts) if isinstance(pts, list) else type(pts).__name__}"
            )
        hand = tuple(_parse_point(p, 2, f"hand[{i}]") for i, p in enumerate(pts))

    pose = None
    if raw.get("pose") is not None:
        p = raw["pose"]
        if not isinstance(p, dict) or {"shoulder", "elbow", "wrist"} - p.keys():
            raise MalformedRecord("pose must have shoulder, elbow, and wrist")
        pose = PoseTriplet(
            shoulder=_parse_point(p["shoulder"], 3, "pose.shoulder"),
            elbow=_parse_point(p["elbow"], 3, "pose.elbow"),
            wrist=_parse_point(p["wrist"], 3, "pose.wrist"),
        )

    bow = _parse_box(raw["bow"], "bow") if raw.get("bow") is not None else None
    strings = _parse_box(raw["strings"], "strings") if raw.get("strings") is not None else None
    return FramePacket(t_ms=t_ms, hand=hand, pose=pose, bow=bow, strings=strings)


def packet_to_dict(packet: FramePacket) -> dict:
    return {
        "t_ms": packet.t_ms,
        "hand": [list(p) for p in packet.hand] if packet.hand is not None else None,
        "pose": (
            {
                "shoulder": list(packet.pose.shoulder),
                "elbow": list(packet.pose.elbow),
                "wrist": list(packet.pose.wrist),
            }
            if packet.pose is not None
            else None
        ),
        "bow": _box_to_dict(packet.bow),
        "strings": _box_to_dict(packet.strings),
    }


def _box_to_dict(box: OrientedBox | None) -> dict | None:
    if box is None:
        return None
    return {"cx": box.cx, "cy": box.cy, "w": box.w, "h": box.h, "theta_deg": box.theta_deg}


def serialize_frame(packet: FramePacket) -> str:
    """Canonical one-line form: sorted keys, compact separators."""
    return canonical_json(packet_to_dict(packet))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def read_stream(source: IO[str]) -> Iterator[FramePacket]:
    """Yield validated packets in order, enforcing strictly increasing t_ms.

    Parse errors are re-raised with the 1-based line number prepended.
    """
    last_t = None
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            packet = parse_frame_line(line)
        except MalformedRecord as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        if last_t is not None and packet.t_ms <= last_t:
            raise NonMonotonicTimestamp(
                f"line {lineno}: t_ms {packet.t_ms} not greater than previous {last_t}"
            )
        last_t = packet.t_ms
        yield packet
