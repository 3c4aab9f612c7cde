"""End-to-end acceptance gate.

Each test covers one release criterion and prints a single PASS/FAIL line
(visible with ``pytest -s`` or on failure). Tolerances and scales are fixed
here; loosening them is a release decision, not a test fix.
"""

import json
import time

import numpy as np
import pytest
import shapely.geometry as sg
from click.testing import CliRunner

from cello_eval import mlp, synth
from cello_eval.cli import cli, latency_stats
from cello_eval.config import EngineConfig, default_catalog
from cello_eval.feedback import ErrorCategory, FeedbackConfig, FeedbackEngine
from cello_eval.geometry import OrientedBox, obb_corners, obb_intersects
from cello_eval.runner import SessionRunner
from cello_eval.service import EvaluatorService
from cello_eval.session import SessionStore
from cello_eval.streams import canonical_json, read_stream

from reference_feedback import ReferenceSimulator
from test_mlp import numeric_gradients, tiny_model


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, f"{name}: {detail}"


# --- 1. geometry vs rasterization oracle ---

RASTER_RES = 2048
CELL = 1.0 / RASTER_RES
N_PAIRS = 10_000


def _corners(box):
    return np.asarray(obb_corners(box))


def _point_in_box(box, xs, ys):
    dx, dy = xs - box.cx, ys - box.cy
    th = np.radians(box.theta_deg)
    c, s = np.cos(th), np.sin(th)
    u = dx * c + dy * s
    v = -dx * s + dy * c
    return (np.abs(u) <= box.w / 2) & (np.abs(v) <= box.h / 2)


def raster_intersects(a, b):
    """Sample cell centers of the overlapping bounding window of both boxes."""
    ca, cb = _corners(a), _corners(b)
    x0 = max(ca[:, 0].min(), cb[:, 0].min())
    x1 = min(ca[:, 0].max(), cb[:, 0].max())
    y0 = max(ca[:, 1].min(), cb[:, 1].min())
    y1 = min(ca[:, 1].max(), cb[:, 1].max())
    if x0 > x1 or y0 > y1:
        return False
    xs = (np.arange(int(np.floor(x0 / CELL)), int(np.ceil(x1 / CELL)) + 1) + 0.5) * CELL
    ys = (np.arange(int(np.floor(y0 / CELL)), int(np.ceil(y1 / CELL)) + 1) + 0.5) * CELL
    grid_x, grid_y = np.meshgrid(xs, ys)
    return bool(np.any(_point_in_box(a, grid_x, grid_y) & _point_in_box(b, grid_x, grid_y)))


def test_geometry_matches_raster_oracle():
    rng = np.random.default_rng(42)

    def random_box():
        return OrientedBox(
            rng.uniform(0, 1), rng.uniform(0, 1),
            rng.uniform(0.02, 0.2), rng.uniform(0.02, 0.2), rng.uniform(-90, 90),
        )

    t0 = time.perf_counter()
    disagreements = 0
    impermissible = 0
    for _ in range(N_PAIRS):
        a, b = random_box(), random_box()
        if obb_intersects(a, b) == raster_intersects(a, b):
            continue
        disagreements += 1
        pa, pb = sg.Polygon(_corners(a)), sg.Polygon(_corners(b))
        separation = 0.0 if pa.intersects(pb) else pa.distance(pb)
        if separation >= 2 * CELL:
            impermissible += 1
    elapsed = time.perf_counter() - t0
    _report(
        "geometry-raster-oracle",
        impermissible == 0 and elapsed < 30.0,
        f"{N_PAIRS} pairs, {disagreements} disagreements all within 2 cells"
        f" minus {impermissible} violations, {elapsed:.1f}s < 30s",
    )


# --- 2. analytic gradients vs finite differences ---

def test_gradients_on_50_random_models():
    rng = np.random.default_rng(99)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        depth = int(rng.integers(0, 3))
        sizes = [int(rng.integers(2, 6)) for _ in range(depth + 2)]
        # nonzero random biases keep pre-activations off the exact ReLU kink,
        # where a central difference is meaningless
        model = tiny_model(sizes, seed=int(rng.integers(1 << 30)))
        x = rng.normal(size=(4, sizes[0]))
        y = rng.integers(0, sizes[-1], size=4)
        _, gw, gb = mlp.loss_and_gradients(model, x, y)
        nw, nb = numeric_gradients(model, x, y)
        for analytic, numeric in zip(gw + gb, nw + nb):
            denom = np.maximum(np.abs(numeric), 1e-6)
            worst = max(worst, float(np.max(np.abs(analytic - numeric) / denom)))
    elapsed = time.perf_counter() - t0
    _report(
        "gradient-check",
        worst < 1e-4 and elapsed < 10.0,
        f"50 models, worst relative error {worst:.2e} < 1e-4, {elapsed:.1f}s < 10s",
    )


# --- 3. training reaches 95% held-out accuracy on the synthetic tasks ---

def test_training_echo():
    details = []
    ok = True
    for task in synth.SynthTask:
        data = synth.generate(synth.SynthSpec(task=task, n_per_class=1000, noise_sigma=0.03, seed=7))
        layers = mlp.WRIST_LAYERS if task is synth.SynthTask.WRIST else mlp.ELBOW_LAYERS
        t0 = time.perf_counter()
        _, rep = mlp.train(data, layers, mlp.TrainConfig(learning_rate=0.1, epochs=60, seed=7))
        elapsed = time.perf_counter() - t0
        ok = ok and rep.val_acc >= 0.95 and elapsed < 60.0
        details.append(f"{task.value} val_acc {rep.val_acc:.3f} in {elapsed:.1f}s")
    _report("training-echo", ok, "; ".join(details) + " (need >= 0.95 in < 60s)")


# --- 4. parameter budgets ---

def test_parameter_budgets():
    wrist = mlp.param_count(mlp.WRIST_LAYERS)
    elbow = mlp.param_count(mlp.ELBOW_LAYERS)
    _report(
        "parameter-budgets",
        (wrist, elbow) == (1107, 445),
        f"wrist {wrist} (want 1107), elbow {elbow} (want 445)",
    )


# --- 5. feedback state machine vs independent simulator, 10^7 frames ---

CATS = list(ErrorCategory)
N_STREAMS = 1000
FRAMES_PER_STREAM = 10_000


def _random_stream(rng):
    toggles = rng.random((FRAMES_PER_STREAM, len(CATS))) < 0.01
    states = np.logical_xor.accumulate(toggles, axis=0)
    times = np.cumsum(rng.integers(16, 50, size=FRAMES_PER_STREAM))
    return times, states


def test_feedback_matches_reference_at_scale():
    cfg = FeedbackConfig()
    catalog = default_catalog()
    rng = np.random.default_rng(7)
    mismatches = 0
    violations = 0
    cat_index = {c: i for i, c in enumerate(CATS)}
    t0 = time.perf_counter()
    for _ in range(N_STREAMS):
        times, states = _random_stream(rng)
        eng = FeedbackEngine(catalog, cfg)
        ref = ReferenceSimulator(len(CATS))
        shown_at: dict[int, int] = {}
        for i in range(FRAMES_PER_STREAM):
            t = int(times[i])
            active = set(np.flatnonzero(states[i]))
            displayed = eng.update_active(t, {CATS[c] for c in active})
            got = [cat_index[ins.category] for ins in displayed]
            if got != ref.step(t, active):
                mismatches += 1
            # hard rules: never more than 2; onset only after a >= 5000 ms
            # streak; removal only after >= 3000 ms on screen
            if len(got) > cfg.max_concurrent:
                violations += 1
            for ins in displayed:
                c = cat_index[ins.category]
                if c not in shown_at:
                    shown_at[c] = ins.shown_since_ms
                    streak = ref.cats[c].streak_start
                    if ins.shown_since_ms != t or streak is None or t - streak < cfg.persist_ms:
                        violations += 1
            for c in list(shown_at):
                if c not in got:
                    if t - shown_at[c] < cfg.min_display_ms:
                        violations += 1
                    del shown_at[c]
    elapsed = time.perf_counter() - t0
    _report(
        "feedback-reference-match",
        mismatches == 0 and violations == 0,
        f"{N_STREAMS} streams x {FRAMES_PER_STREAM} frames: {mismatches} mismatches,"
        f" {violations} rule violations, {elapsed:.0f}s",
    )


# --- 6. replay determinism and live-equivalence ---

def test_replay_deterministic_and_equal_to_live(fixtures_dir, wrist_model, elbow_model, tmp_path):
    runner = CliRunner()
    args = [
        "replay",
        "--stream", str(fixtures_dir / "stream.jsonl"),
        "--wrist-model", str(fixtures_dir / "wrist_model.json"),
        "--elbow-model", str(fixtures_dir / "elbow_model.json"),
    ]
    for out in ("a", "b"):
        res = runner.invoke(cli, args + ["--out", str(tmp_path / out)], catch_exceptions=False)
        assert res.exit_code == 0, res.output
    names = ("frames.jsonl", "timeline.jsonl", "summary.json")
    deterministic = all(
        (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names
    )

    service = EvaluatorService(wrist_model, elbow_model, SessionStore(tmp_path / "store"))
    token = service.start_session("acceptance", None)
    live_frames = []
    with open(fixtures_dir / "stream.jsonl") as f:
        for line in f:
            reply = service.handle({"type": "frame", "token": token, "packet": json.loads(line)})
            assert reply["type"] == "frame_result", reply
            live_frames.append(canonical_json(reply["result"]))
    summary_msg = service.end_session(token)
    replay_frames = (tmp_path / "a" / "frames.jsonl").read_text().splitlines()
    replay_summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    live_equal = (
        live_frames == replay_frames
        and summary_msg["summary"] == replay_summary["summary"]
    )
    _report(
        "replay-determinism-live-equivalence",
        deterministic and live_equal,
        f"2 replay runs byte-identical: {deterministic};"
        f" service matches replay on {len(live_frames)} frames + summary: {live_equal}",
    )


# --- 7. summary math ---

def test_summary_normalization_math(fixtures_dir, wrist_model, elbow_model):
    def run(extra_empty_frames):
        runner = SessionRunner(wrist_model, elbow_model, EngineConfig())
        last_t = 0
        with open(fixtures_dir / "stream.jsonl") as f:
            for packet in read_stream(f):
                runner.process(packet)
                last_t = packet.t_ms
        from cello_eval.streams import FramePacket

        for i in range(extra_empty_frames):
            runner.process(FramePacket(t_ms=last_t + 33 * (i + 1)))
        return runner.summarize()

    base = run(0)
    injected = run(100)

    sums_ok = True
    for section in base.sections.values():
        normalized = [e["normalized_pct"] for e in section.values() if e["normalized_pct"] is not None]
        if normalized and abs(sum(normalized) - 100.0) > 0.01:
            sums_ok = False

    invariance_ok = True
    raw_changed = False
    for name, section in base.sections.items():
        for cls, entry in section.items():
            other = injected.sections[name][cls]
            if entry["normalized_pct"] is not None:
                if other["normalized_pct"] != pytest.approx(entry["normalized_pct"]):
                    invariance_ok = False
                if other["raw_pct"] != entry["raw_pct"]:
                    raw_changed = True
    _report(
        "summary-math",
        sums_ok and invariance_ok and raw_changed,
        f"normalized sections sum to 100±0.01: {sums_ok}; undetected injection leaves"
        f" normalized unchanged: {invariance_ok}; raw changed: {raw_changed}",
    )


# --- 8. per-frame engine latency ---

def test_engine_latency_budget(fixtures_dir, wrist_model, elbow_model):
    with open(fixtures_dir / "stream.jsonl") as f:
        packets = list(read_stream(f))
    runner = SessionRunner(wrist_model, elbow_model, EngineConfig())
    durations_us = []
    for packet in packets:
        t0 = time.perf_counter_ns()
        runner.process(packet)
        durations_us.append((time.perf_counter_ns() - t0) / 1000.0)
    stats = latency_stats(durations_us)
    _report(
        "engine-latency",
        stats["p95_us"] < 5000.0,
        f"p95 {stats['p95_us']:.0f} us < 5000 us over {stats['frames']} frames"
        f" ({stats['fps']:.0f} fps)",
    )
