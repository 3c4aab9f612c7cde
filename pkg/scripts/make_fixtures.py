"""Regenerate the committed test fixtures (models, stream, golden summary).

Run from the repo root:  python3 scripts/make_fixtures.py [--regen]

Without --regen this refuses to overwrite existing fixtures; the golden
files are compared byte-exact in CI, so regeneration must be explicit.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

from cello_eval import mlp, synth
from cello_eval.config import EngineConfig
from cello_eval.classify import result_to_dict
from cello_eval.runner import SessionRunner
from cello_eval.streams import canonical_json, packet_to_dict, parse_frame_line


def train_fixture_models() -> tuple[mlp.MlpModel, mlp.MlpModel]:
    cfg = mlp.TrainConfig(learning_rate=0.1, batch_size=32, epochs=60, seed=7)
    wrist_data = synth.generate(synth.SynthSpec(synth.SynthTask.WRIST, 300, 0.03, 7))
    wrist, wrist_rep = mlp.train(wrist_data, mlp.WRIST_LAYERS, cfg)
    elbow_data = synth.generate(synth.SynthSpec(synth.SynthTask.ELBOW, 300, 0.03, 7))
    elbow, elbow_rep = mlp.train(elbow_data, mlp.ELBOW_LAYERS, cfg)
    print(f"fixture models: wrist val_acc {wrist_rep.val_acc:.3f}, elbow val_acc {elbow_rep.val_acc:.3f}")
    return wrist, elbow


def hand_points(rng: np.random.Generator, angle_deg: float) -> list[list[float]]:
    pts = synth.rotate_hand(synth.hand_template(), angle_deg)
    pts = pts + np.array([0.45, 0.65]) + rng.normal(0, 0.004, size=pts.shape)
    return np.clip(pts, -0.5, 1.5).round(5).tolist()


def pose_triplet(rng: np.random.Generator, elevation_deg: float) -> dict:
    el = math.radians(elevation_deg)
    shoulder = np.array([0.35, 0.45, 0.0])
    elbow = shoulder + 0.28 * np.array([math.cos(el), -math.sin(el), 0.1])
    wrist = elbow + 0.25 * np.array([math.cos(el - 0.6), -math.sin(el - 0.6), -0.05])
    pts = [p + rng.normal(0, 0.003, size=3) for p in (shoulder, elbow, wrist)]
    return {k: np.clip(v, -0.5, 1.5).round(5).tolist() for k, v in zip(("shoulder", "elbow", "wrist"), pts)}


STRINGS_BOX = {"cx": 0.5, "cy": 0.5, "w": 0.5, "h": 0.1, "theta_deg": -90.0}


def bow_box(p: float, theta_deg: float = 0.0) -> dict:
    # Zone axis runs x=0.5, y from 0.75 (bridge) to 0.25 (fingerboard).
    return {"cx": 0.5, "cy": round(0.75 - 0.5 * p, 5), "w": 0.6, "h": 0.05, "theta_deg": theta_deg}


def make_stream() -> list[str]:
    rng = np.random.default_rng(42)
    lines = []
    for i in range(600):
        t = i * 33
        rec = {"t_ms": t, "hand": None, "pose": None, "bow": None, "strings": None}
        if i < 150:  # everything correct
            rec["hand"] = hand_points(rng, 0.0)
            rec["pose"] = pose_triplet(rng, 0.0)
            rec["bow"], rec["strings"] = bow_box(0.5), dict(STRINGS_BOX)
        elif i < 350:  # sustained supinated wrist, rest correct
            rec["hand"] = hand_points(rng, 35.0)
            rec["pose"] = pose_triplet(rng, 0.0)
            rec["bow"], rec["strings"] = bow_box(0.5), dict(STRINGS_BOX)
        elif i < 450:  # elbow too low + bow too high, hand intermittently missing
            if i % 7 != 0:
                rec["hand"] = hand_points(rng, 0.0)
            rec["pose"] = pose_triplet(rng, -30.0)
            rec["bow"], rec["strings"] = bow_box(0.92), dict(STRINGS_BOX)
        else:  # recovery, with a stretch of out-of-zone bow
            rec["hand"] = hand_points(rng, 0.0)
            rec["pose"] = pose_triplet(rng, 0.0)
            if 500 <= i < 540:
                rec["bow"] = {"cx": 0.5, "cy": 0.95, "w": 0.6, "h": 0.05, "theta_deg": 0.0}
            else:
                rec["bow"] = bow_box(0.5)
            rec["strings"] = dict(STRINGS_BOX)
        lines.append(canonical_json(rec))
    return lines


def make_golden(wrist: mlp.MlpModel, elbow: mlp.MlpModel, stream_lines: list[str]) -> dict[str, str]:
    runner = SessionRunner(wrist, elbow, EngineConfig())
    frames, timeline = [], []
    last = None
    for line in stream_lines:
        out = runner.process(parse_frame_line(line))
        frames.append(canonical_json(result_to_dict(out.result)))
        displayed = [{"category": i.category.value, "text": i.text} for i in out.instructions]
        if displayed != last:
            timeline.append(canonical_json({"t_ms": out.result.t_ms, "displayed": displayed}))
            last = displayed
    summary = {
        "summary": runner.summarize().to_dict(),
        "config_snapshot": runner.config.snapshot(),
        "stream_digest": runner.stream_digest(),
    }
    return {
        "golden_frames.jsonl": "\n".join(frames) + "\n",
        "golden_timeline.jsonl": "\n".join(timeline) + "\n",
        "golden_summary.json": canonical_json(summary) + "\n",
    }


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--regen", action="store_true")
    args = parser.parse_args()
    FIXTURES.mkdir(parents=True, exist_ok=True)
    if any(FIXTURES.iterdir()) and not args.regen:
        sys.exit("fixtures already exist; pass --regen to overwrite")

    wrist, elbow = train_fixture_models()
    mlp.save_path(wrist, FIXTURES / "wrist_model.json")
    mlp.save_path(elbow, FIXTURES / "elbow_model.json")
    stream_lines = make_stream()
    (FIXTURES / "stream.jsonl").write_text("\n".join(stream_lines) + "\n", encoding="utf-8")
    for name, content in make_golden(wrist, elbow, stream_lines).items():
        (FIXTURES / name).write_text(content, encoding="utf-8")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
