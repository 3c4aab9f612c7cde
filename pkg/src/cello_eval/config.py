"""Engine configuration: bow thresholds, feedback timing, instruction texts.

One versioned JSON document covers everything the CLI and service need:

    {"version": 1,
     "bow": {"angle_tolerance_deg": 10, "low_threshold": 0.15, "high_threshold": 0.85},
     "feedback": {"persist_ms": 5000, "min_display_ms": 3000, "flicker_ms": 500, "max_concurrent": 2},
     "instructions": {"wrist_supinated": "...", ...}}

All keys are optional; missing ones fall back to defaults. Instruction
texts are data, not code — the bundled defaults file can be overridden.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import BadConfig
from .feedback import ErrorCategory, FeedbackConfig
from .geometry import BowConfig

CONFIG_VERSION = 1


def default_catalog() -> dict[ErrorCategory, str]:
    raw = json.loads(resources.files("cello_eval.data").joinpath("instructions.json").read_text())
    return {ErrorCategory(key): text for key, text in raw.items()}


@dataclass(frozen=True)
class EngineConfig:
    bow: BowConfig = field(default_factory=BowConfig)
    feedback: FeedbackConfig = field(default_factory=FeedbackConfig)
    catalog: dict[ErrorCategory, str] = field(default_factory=default_catalog)

    def snapshot(self) -> dict:
        """JSON-friendly form recorded with every session."""
        return {
            "version": CONFIG_VERSION,
            "bow": {
                "angle_tolerance_deg": self.bow.angle_tolerance_deg,
                "low_threshold": self.bow.low_threshold,
                "high_threshold": self.bow.high_threshold,
            },
            "feedback": {
                "persist_ms": self.feedback.persist_ms,
                "min_display_ms": self.feedback.min_display_ms,
                "flicker_ms": self.feedback.flicker_ms,
                "max_concurrent": self.feedback.max_concurrent,
            },
            "instructions": {cat.value: text for cat, text in self.catalog.items()},
        }


def config_from_dict(raw: dict, base: EngineConfig | None = None) -> EngineConfig:
    base = base or EngineConfig()
    if not isinstance(raw, dict):
        raise BadConfig("config must be an object")
    version = raw.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise BadConfig(f"unsupported config version {version}")
    try:
        bow_raw = raw.get("bow", {})
        bow = BowConfig(
            angle_tolerance_deg=float(bow_raw.get("angle_tolerance_deg", base.bow.angle_tolerance_deg)),
            low_threshold=float(bow_raw.get("low_threshold", base.bow.low_threshold)),
            high_threshold=float(bow_raw.get("high_threshold", base.bow.high_threshold)),
        )
        fb_raw = raw.get("feedback", {})
        fb = FeedbackConfig(
            persist_ms=int(fb_raw.get("persist_ms", base.feedback.persist_ms)),
            min_display_ms=int(fb_raw.get("min_display_ms", base.feedback.min_display_ms)),
            flicker_ms=int(fb_raw.get("flicker_ms", base.feedback.flicker_ms)),
            max_concurrent=int(fb_raw.get("max_concurrent", base.feedback.max_concurrent)),
        )
        catalog = dict(base.catalog)
        for key, text in raw.get("instructions", {}).items():
            catalog[ErrorCategory(key)] = str(text)
    except (TypeError, ValueError) as exc:
        raise BadConfig(f"invalid config: {exc}") from None
    if fb.persist_ms < 0 or fb.min_display_ms < 0 or fb.flicker_ms < 0 or fb.max_concurrent < 1:
        raise BadConfig("feedback timing values must be non-negative, max_concurrent >= 1")
    return EngineConfig(bow=bow, feedback=fb, catalog=catalog)


def load_config(path) -> EngineConfig:
    with open(path, "r", encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise BadConfig(f"unreadable config file: {exc}") from None
    return config_from_dict(raw)
