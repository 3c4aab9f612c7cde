"""Debounced correction-instruction state machine.

Rules, applied at every frame update (strictly increasing t_ms):

1. A category becomes display-eligible once its error has been active for at
   least ``persist_ms``, where interruptions shorter than ``flicker_ms`` do
   not break the streak. Interruptions of ``flicker_ms`` or longer reset it.
   Undetected frames count as interruptions, never as errors.
2. A displayed instruction is removed only when at least ``min_display_ms``
   have elapsed since it appeared AND the error is cleared (inactive now and
   inactive for at least ``flicker_ms``, so momentary flicker never removes
   an instruction).
3. Eligible categories are ranked by cumulative error-frame count descending
   (ties by category declaration order); at most ``max_concurrent`` are
   shown, most frequent first.
4. Already-displayed instructions are pinned: a newly eligible category never
   evicts one, it can only fill a free slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .classify import ElbowClass, FrameResult, WristClass
from .errors import NonMonotonicTime
from .geometry import BowAngle, BowHeight


class ErrorCategory(Enum):
    WRIST_SUPINATED = "wrist_supinated"
    WRIST_OVER_PRONATED = "wrist_over_pronated"
    ELBOW_TOO_LOW = "elbow_too_low"
    ELBOW_TOO_HIGH = "elbow_too_high"
    BOW_TOO_HIGH = "bow_too_high"
    BOW_TOO_LOW = "bow_too_low"
    BOW_ANGLE_OFF = "bow_angle_off"
    BOW_OUT_OF_ZONE = "bow_out_of_zone"


CATEGORY_ORDER = {cat: i for i, cat in enumerate(ErrorCategory)}


@dataclass(frozen=True)
class Instruction:
    category: ErrorCategory
    text: str
    shown_since_ms: int


@dataclass(frozen=True)
class FeedbackConfig:
    persist_ms: int = 5000
    min_display_ms: int = 3000
    flicker_ms: int = 500
    max_concurrent: int = 2


def active_categories(result: FrameResult) -> set[ErrorCategory]:
    """Error categories asserted by one frame result.

    An out-of-zone bow suppresses the height/angle categories (they are not
    applicable there), and missing detections assert nothing.
    """
    active: set[ErrorCategory] = set()
    if result.wrist is WristClass.SUPINATED:
        active.add(ErrorCategory.WRIST_SUPINATED)
    elif result.wrist is WristClass.OVER_PRONATED:
        active.add(ErrorCategory.WRIST_OVER_PRONATED)
    if result.elbow is ElbowClass.TOO_LOW:
        active.add(ErrorCategory.ELBOW_TOO_LOW)
    elif result.elbow is ElbowClass.TOO_HIGH:
        active.add(ErrorCategory.ELBOW_TOO_HIGH)
    if result.bow_detected and not result.bow.in_zone:
        active.add(ErrorCategory.BOW_OUT_OF_ZONE)
    if result.bow.height is BowHeight.TOO_HIGH:
        active.add(ErrorCategory.BOW_TOO_HIGH)
    elif result.bow.height is BowHeight.TOO_LOW:
        active.add(ErrorCategory.BOW_TOO_LOW)
    if result.bow.angle is BowAngle.INCORRECT:
        active.add(ErrorCategory.BOW_ANGLE_OFF)
    return active


@dataclass
class FeedbackState:
    streak_start: dict[ErrorCategory, int | None] = field(
        default_factory=lambda: {c: None for c in ErrorCategory}
    )
    last_active: dict[ErrorCategory, int | None] = field(
        default_factory=lambda: {c: None for c in ErrorCategory}
    )
    counts: dict[ErrorCategory, int] = field(
        default_factory=lambda: {c: 0 for c in ErrorCategory}
    )
    shown_since: dict[ErrorCategory, int] = field(default_factory=dict)
    last_t: int | None = None


class FeedbackEngine:
    def __init__(self, catalog: dict[ErrorCategory, str], config: FeedbackConfig = FeedbackConfig()):
        self.catalog = catalog
        self.config = config
        self.state = FeedbackState()

    def update(self, result: FrameResult) -> list[Instruction]:
        return self.update_active(result.t_ms, active_categories(result))

    def update_active(self, t: int, active: set[ErrorCategory]) -> list[Instruction]:
        """Advance the state machine one frame; returns the displayed list."""
        st = self.state
        cfg = self.config
        if st.last_t is not None and t <= st.last_t:
            raise NonMonotonicTime(f"t_ms {t} not greater than previous {st.last_t}")
        st.last_t = t

        for cat in ErrorCategory:
            if cat in active:
                st.counts[cat] += 1
                last = st.last_active[cat]
                if st.streak_start[cat] is None or (last is not None and t - last >= cfg.flicker_ms):
                    st.streak_start[cat] = t
                st.last_active[cat] = t
            else:
                last = st.last_active[cat]
                if st.streak_start[cat] is not None and last is not None and t - last >= cfg.flicker_ms:
                    st.streak_start[cat] = None

        # Removal: min display time elapsed and the error durably cleared.
        for cat in list(st.shown_since):
            if t - st.shown_since[cat] < cfg.min_display_ms:
                continue
            if cat in active:
                continue
            last = st.last_active[cat]
            if last is None or t - last >= cfg.flicker_ms:
                del st.shown_since[cat]

        eligible = [
            cat
            for cat in ErrorCategory
            if st.streak_start[cat] is not None and t - st.streak_start[cat] >= cfg.persist_ms
        ]
        candidates = sorted(
            (c for c in eligible if c not in st.shown_since),
            key=lambda c: (-st.counts[c], CATEGORY_ORDER[c]),
        )
        for cat in candidates[: cfg.max_concurrent - len(st.shown_since)]:
            st.shown_since[cat] = t

        displayed = sorted(st.shown_since, key=lambda c: (-st.counts[c], CATEGORY_ORDER[c]))
        return [
            Instruction(category=c, text=self.catalog[c], shown_since_ms=st.shown_since[c])
            for c in displayed
        ]
