"""Per-frame orchestration: landmarks + boxes -> one FrameResult."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import features, mlp
from .errors import DegenerateHand, DegeneratePose, ModelShapeMismatch
from .geometry import BowAngle, BowAssessment, BowConfig, BowHeight, classify_bow
from .streams import FramePacket


class WristClass(Enum):
    NORMAL = "normal"
    SUPINATED = "supinated"
    OVER_PRONATED = "over_pronated"
    UNDETECTED = "undetected"


class ElbowClass(Enum):
    NORMAL = "normal"
    TOO_LOW = "too_low"
    TOO_HIGH = "too_high"
    UNDETECTED = "undetected"


@dataclass(frozen=True)
class FrameResult:
    t_ms: int
    wrist: WristClass
    wrist_probs: tuple[float, ...] | None
    elbow: ElbowClass
    elbow_probs: tuple[float, ...] | None
    bow: BowAssessment
    bow_detected: bool  # both bow and string boxes present in the packet

    @property
    def wrist_correct(self) -> bool | None:
        if self.wrist is WristClass.UNDETECTED:
            return None
        return self.wrist is WristClass.NORMAL

    @property
    def elbow_correct(self) -> bool | None:
        if self.elbow is ElbowClass.UNDETECTED:
            return None
        return self.elbow is ElbowClass.NORMAL

    @property
    def bow_height_correct(self) -> bool | None:
        if self.bow.height is BowHeight.NOT_APPLICABLE:
            return None
        return self.bow.height is BowHeight.OK

    @property
    def bow_angle_correct(self) -> bool | None:
        if self.bow.angle is BowAngle.NOT_APPLICABLE:
            return None
        return self.bow.angle is BowAngle.CORRECT


def check_models(wrist_model: mlp.MlpModel, elbow_model: mlp.MlpModel) -> None:
    """Engine-construction-time shape validation."""
    if wrist_model.input_size != features.HAND_FEATURE_SIZE:
        raise ModelShapeMismatch(
            f"wrist model expects {wrist_model.input_size} inputs, need {features.HAND_FEATURE_SIZE}"
        )
    if elbow_model.input_size != features.ELBOW_FEATURE_SIZE:
        raise ModelShapeMismatch(
            f"elbow model expects {elbow_model.input_size} inputs, need {features.ELBOW_FEATURE_SIZE}"
        )


def _argmax_label(probs: np.ndarray, labels: list[str]) -> str:
    # Ties break toward the lowest class index for deterministic replay.
    return labels[int(np.argmax(probs))]


def classify_frame(
    packet: FramePacket,
    wrist_model: mlp.MlpModel,
    elbow_model: mlp.MlpModel,
    cfg: BowConfig,
) -> FrameResult:
    """Classify one frame; missing or degenerate detections never raise."""
    wrist = WristClass.UNDETECTED
    wrist_probs = None
    if packet.hand is not None:
        try:
            vec = features.normalize_hand(packet.hand)
        except DegenerateHand:
            pass
        else:
            probs = mlp.forward(wrist_model, vec)
            wrist = WristClass(_argmax_label(probs, wrist_model.class_labels))
            wrist_probs = tuple(float(p) for p in probs)

    elbow = ElbowClass.UNDETECTED
    elbow_probs = None
    if packet.pose is not None:
        try:
            vec = features.elbow_features(packet.pose)
        except DegeneratePose:
            pass
        else:
            probs = mlp.forward(elbow_model, vec)
            elbow = ElbowClass(_argmax_label(probs, elbow_model.class_labels))
            elbow_probs = tuple(float(p) for p in probs)

    bow = classify_bow(packet.bow, packet.strings, cfg)
    return FrameResult(
        t_ms=packet.t_ms,
        wrist=wrist,
        wrist_probs=wrist_probs,
        elbow=elbow,
        elbow_probs=elbow_probs,
        bow=bow,
        bow_detected=packet.bow is not None and packet.strings is not None,
    )


def result_to_dict(result: FrameResult) -> dict:
    """Serialized replay-output form of a FrameResult."""
    return {
        "t_ms": result.t_ms,
        "wrist": {
            "class": result.wrist.value,
            "probs": list(result.wrist_probs) if result.wrist_probs is not None else None,
        },
        "elbow": {
            "class": result.elbow.value,
            "probs": list(result.elbow_probs) if result.elbow_probs is not None else None,
        },
        "bow": {
            "detected": result.bow_detected,
            "in_zone": result.bow.in_zone,
            "height": result.bow.height.value,
            "angle": result.bow.angle.value,
            "zone_position": result.bow.zone_position,
            "deviation_deg": result.bow.deviation_deg,
        },
        "correct": {
            "wrist": result.wrist_correct,
            "elbow": result.elbow_correct,
            "bow_height": result.bow_height_correct,
            "bow_angle": result.bow_angle_correct,
        },
    }
