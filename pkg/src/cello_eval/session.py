"""Session accumulation, summary reports, and per-user history persistence.

Each frame contributes one class tally to each of the four report sections
(bow height, bow angle, hand posture, elbow posture); undetected and
not-applicable frames are tallied too, so section counts always sum to the
total frame count. Raw percentages divide by total frames; normalized
percentages divide by the detected frames within the section.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .classify import FrameResult
from .errors import EmptySession, NonMonotonicTime, StoreUnavailable, UnknownSession

SECTIONS = {
    "bow_height": ["ok", "too_high", "too_low", "not_applicable"],
    "bow_angle": ["correct", "incorrect", "not_applicable"],
    "hand_posture": ["normal", "supinated", "over_pronated", "undetected"],
    "elbow_posture": ["normal", "too_low", "too_high", "undetected"],
}

UNDETECTED_CLASSES = {"not_applicable", "undetected"}


def section_classes(result: FrameResult) -> dict[str, str]:
    return {
        "bow_height": result.bow.height.value,
        "bow_angle": result.bow.angle.value,
        "hand_posture": result.wrist.value,
        "elbow_posture": result.elbow.value,
    }


@dataclass
class _Run:
    cls: str
    start_ms: int
    end_ms: int
    length: int


@dataclass
class SessionAccumulator:
    session_id: str = ""
    user_id: str = ""
    counts: dict[str, dict[str, int]] = field(
        default_factory=lambda: {s: {c: 0 for c in classes} for s, classes in SECTIONS.items()}
    )
    total_frames: int = 0
    first_t_ms: int | None = None
    last_t_ms: int | None = None
    current_runs: dict[str, _Run | None] = field(
        default_factory=lambda: {s: None for s in SECTIONS}
    )
    best_runs: dict[str, dict[str, _Run]] = field(
        default_factory=lambda: {s: {} for s in SECTIONS}
    )

    def _close_run(self, section: str) -> None:
        run = self.current_runs[section]
        if run is None:
            return
        best = self.best_runs[section].get(run.cls)
        if best is None or run.length > best.length:
            self.best_runs[section][run.cls] = run
        self.current_runs[section] = None


def accumulate(acc: SessionAccumulator, result: FrameResult) -> SessionAccumulator:
    """Fold one frame result into the accumulator (mutates and returns it)."""
    t = result.t_ms
    if acc.last_t_ms is not None and t <= acc.last_t_ms:
        raise NonMonotonicTime(f"t_ms {t} not greater than previous {acc.last_t_ms}")
    if acc.first_t_ms is None:
        acc.first_t_ms = t
    acc.last_t_ms = t
    acc.total_frames += 1

    for section, cls in section_classes(result).items():
        acc.counts[section][cls] += 1
        run = acc.current_runs[section]
        if run is not None and run.cls == cls:
            run.end_ms = t
            run.length += 1
        else:
            acc._close_run(section)
            acc.current_runs[section] = _Run(cls=cls, start_ms=t, end_ms=t, length=1)
    return acc


@dataclass(frozen=True)
class SessionSummary:
    total_frames: int
    duration_ms: int
    sections: dict[str, dict[str, dict]]  # section -> class -> entry

    def to_dict(self) -> dict:
        return {
            "total_frames": self.total_frames,
            "duration_ms": self.duration_ms,
            "sections": self.sections,
        }


def summarize(acc: SessionAccumulator) -> SessionSummary:
    """Per-section breakdown with raw and normalized percentages.

    Representative frame per class is the midpoint timestamp of its longest
    run (transition frames at run edges make poor screenshots).
    """
    if acc.total_frames == 0:
        raise EmptySession("no frames accumulated")
    for section in SECTIONS:
        acc._close_run(section)

    sections: dict[str, dict[str, dict]] = {}
    for section, classes in SECTIONS.items():
        detected = sum(
            n for cls, n in acc.counts[section].items() if cls not in UNDETECTED_CLASSES
        )
        out: dict[str, dict] = {}
        for cls in classes:
            n = acc.counts[section][cls]
            best = acc.best_runs[section].get(cls)
            entry = {
                "count": n,
                "raw_pct": 100.0 * n / acc.total_frames,
                "normalized_pct": (
                    100.0 * n / detected
                    if detected and cls not in UNDETECTED_CLASSES
                    else None
                ),
                "representative_t_ms": (
                    (best.start_ms + best.end_ms) // 2 if best is not None and n > 0 else None
                ),
            }
            out[cls] = entry
        sections[section] = out
    return SessionSummary(
        total_frames=acc.total_frames,
        duration_ms=(acc.last_t_ms - acc.first_t_ms),
        sections=sections,
    )


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    user_id: str
    started_at: str  # ISO-8601
    summary: SessionSummary
    config_snapshot: dict
    wrist_model_digest: str
    elbow_model_digest: str
    stream_digest: str
    latency_ms_p95: float | None = None

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "session_id": self.session_id,
            "user_id": self.user_id,
            "started_at": self.started_at,
            "summary": self.summary.to_dict(),
            "config_snapshot": self.config_snapshot,
            "wrist_model_digest": self.wrist_model_digest,
            "elbow_model_digest": self.elbow_model_digest,
            "stream_digest": self.stream_digest,
            "latency_ms_p95": self.latency_ms_p95,
        }

    @staticmethod
    def from_dict(raw: dict) -> "SessionRecord":
        summary = SessionSummary(
            total_frames=raw["summary"]["total_frames"],
            duration_ms=raw["summary"]["duration_ms"],
            sections=raw["summary"]["sections"],
        )
        return SessionRecord(
            session_id=raw["session_id"],
            user_id=raw["user_id"],
            started_at=raw["started_at"],
            summary=summary,
            config_snapshot=raw["config_snapshot"],
            wrist_model_digest=raw["wrist_model_digest"],
            elbow_model_digest=raw["elbow_model_digest"],
            stream_digest=raw["stream_digest"],
            latency_ms_p95=raw.get("latency_ms_p95"),
        )


_SAFE_NAME = re.compile(r"[^A-Za-z0-9._-]")


def _safe(name: str) -> str:
    return _SAFE_NAME.sub("_", name) or "_"


class SessionStore:
    """One directory per user, one JSON file per session."""

    def __init__(self, root):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot use store directory {root}: {exc}") from None

    def persist(self, record: SessionRecord) -> Path:
        user_dir = self.root / _safe(record.user_id)
        try:
            user_dir.mkdir(parents=True, exist_ok=True)
            path = user_dir / f"{_safe(record.session_id)}.json"
            path.write_text(json.dumps(record.to_dict(), sort_keys=True), encoding="utf-8")
        except OSError as exc:
            raise StoreUnavailable(f"cannot write session record: {exc}") from None
        return path

    def list_history(self, user_id: str) -> list[SessionRecord]:
        user_dir = self.root / _safe(user_id)
        if not user_dir.is_dir():
            return []
        records = [
            SessionRecord.from_dict(json.loads(p.read_text(encoding="utf-8")))
            for p in sorted(user_dir.glob("*.json"))
        ]
        return sorted(records, key=lambda r: r.started_at)

    def load(self, session_id: str) -> SessionRecord:
        target = f"{_safe(session_id)}.json"
        for path in sorted(self.root.glob(f"*/{target}")):
            return SessionRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))
        raise UnknownSession(f"no session {session_id!r} in store")
