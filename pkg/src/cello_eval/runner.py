"""Shared per-session pipeline: classify -> feedback -> accumulate.

Both the offline replay command and the live service drive a SessionRunner,
which is what guarantees live-vs-replay equivalence frame for frame.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import classify, mlp, session
from .classify import FrameResult
from .config import EngineConfig
from .feedback import FeedbackEngine, Instruction
from .streams import FramePacket, serialize_frame


def color_of(flag: bool | None) -> str:
    if flag is None:
        return "none"
    return "blue" if flag else "orange"


def result_colors(result: FrameResult) -> dict[str, str]:
    return {
        "wrist": color_of(result.wrist_correct),
        "elbow": color_of(result.elbow_correct),
        "bow_height": color_of(result.bow_height_correct),
        "bow_angle": color_of(result.bow_angle_correct),
    }


@dataclass(frozen=True)
class FrameOutput:
    result: FrameResult
    instructions: list[Instruction]
    colors: dict[str, str]


def model_digest(model: mlp.MlpModel) -> str:
    blob = mlp.model_to_dict(model)
    return hashlib.sha256(json.dumps(blob, sort_keys=True).encode()).hexdigest()


class SessionRunner:
    """Processes one session's packets in order; single consumer."""

    def __init__(self, wrist_model: mlp.MlpModel, elbow_model: mlp.MlpModel, config: EngineConfig):
        classify.check_models(wrist_model, elbow_model)
        self.wrist_model = wrist_model
        self.elbow_model = elbow_model
        self.config = config
        self.feedback = FeedbackEngine(config.catalog, config.feedback)
        self.accumulator = session.SessionAccumulator()
        self._stream_hash = hashlib.sha256()

    def process(self, packet: FramePacket) -> FrameOutput:
        result = classify.classify_frame(packet, self.wrist_model, self.elbow_model, self.config.bow)
        instructions = self.feedback.update(result)
        session.accumulate(self.accumulator, result)
        self._stream_hash.update(serialize_frame(packet).encode())
        self._stream_hash.update(b"\n")
        return FrameOutput(result=result, instructions=instructions, colors=result_colors(result))

    def summarize(self) -> session.SessionSummary:
        return session.summarize(self.accumulator)

    def stream_digest(self) -> str:
        return self._stream_hash.hexdigest()
