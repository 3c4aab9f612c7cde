"""Operator entry points: replay, train, bench, serve.

Exit codes: 0 success, 1 user/data error, 2 internal invariant violation.
"""

from __future__ import annotations

import json
import statistics
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import mlp, synth
from .classify import result_to_dict
from .config import EngineConfig, load_config
from .errors import CelloEvalError
from .runner import SessionRunner
from .streams import canonical_json, read_stream

WRIST = "wrist"
ELBOW = "elbow"


@click.group()
def cli() -> None:
    """Cellist posture evaluation engine."""


def _load_engine_config(path: str | None) -> EngineConfig:
    return load_config(path) if path else EngineConfig()


def _load_models(wrist_path: str, elbow_path: str):
    return mlp.load_path(wrist_path), mlp.load_path(elbow_path)


def _read_packets(stream_path: str):
    with open(stream_path, "r", encoding="utf-8") as f:
        yield from read_stream(f)


@cli.command()
@click.option("--stream", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--wrist-model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--elbow-model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def replay(stream, wrist_model, elbow_model, config_path, out) -> None:
    """Replay a recorded stream; writes frames.jsonl, timeline.jsonl, summary.json."""
    config = _load_engine_config(config_path)
    wrist, elbow = _load_models(wrist_model, elbow_model)
    runner = SessionRunner(wrist, elbow, config)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    last_displayed = None
    with open(out_dir / "frames.jsonl", "w", encoding="utf-8") as frames_f, open(
        out_dir / "timeline.jsonl", "w", encoding="utf-8"
    ) as timeline_f:
        for packet in _read_packets(stream):
            output = runner.process(packet)
            frames_f.write(canonical_json(result_to_dict(output.result)) + "\n")
            displayed = [
                {"category": i.category.value, "text": i.text} for i in output.instructions
            ]
            if displayed != last_displayed:
                timeline_f.write(
                    canonical_json({"t_ms": packet.t_ms, "displayed": displayed}) + "\n"
                )
                last_displayed = displayed
    summary = runner.summarize()
    record = {
        "summary": summary.to_dict(),
        "config_snapshot": runner.config.snapshot(),
        "stream_digest": runner.stream_digest(),
    }
    (out_dir / "summary.json").write_text(canonical_json(record) + "\n", encoding="utf-8")
    click.echo(f"replayed {summary.total_frames} frames -> {out_dir}")


@cli.command()
@click.argument("task", type=click.Choice([WRIST, ELBOW]))
@click.option("--synth", "use_synth", is_flag=True, help="train on the synthetic generator")
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="JSONL dataset file")
@click.option("--n-per-class", default=1000, show_default=True)
@click.option("--noise-sigma", default=0.03, show_default=True)
@click.option("--layers", default=None, help="comma-separated layer sizes")
@click.option("--epochs", default=150, show_default=True)
@click.option("--lr", default=0.1, show_default=True)
@click.option("--batch-size", default=32, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--val-fraction", default=0.2, show_default=True)
@click.option("--momentum", default=0.0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def train(
    task, use_synth, dataset, n_per_class, noise_sigma, layers, epochs, lr,
    batch_size, seed, val_fraction, momentum, out,
) -> None:
    """Train a posture classifier and write its weight file."""
    if not use_synth and dataset is None:
        raise click.UsageError("pass --synth or --dataset")
    if task == WRIST:
        default_layers, classes = mlp.WRIST_LAYERS, synth.WRIST_CLASSES
        synth_task = synth.SynthTask.WRIST
    else:
        default_layers, classes = mlp.ELBOW_LAYERS, synth.ELBOW_CLASSES
        synth_task = synth.SynthTask.ELBOW
    layer_sizes = [int(s) for s in layers.split(",")] if layers else default_layers

    if dataset is not None:
        with open(dataset, "r", encoding="utf-8") as f:
            data = synth.read_dataset(f, classes)
    else:
        data = synth.generate(
            synth.SynthSpec(task=synth_task, n_per_class=n_per_class, noise_sigma=noise_sigma, seed=seed)
        )

    cfg = mlp.TrainConfig(
        learning_rate=lr, batch_size=batch_size, epochs=epochs, seed=seed,
        validation_fraction=val_fraction, momentum=momentum,
    )
    model, report = mlp.train(data, layer_sizes, cfg)
    mlp.save_path(model, out)
    click.echo(f"layers: {layer_sizes}  parameters: {report.param_count}")
    click.echo(f"train_acc: {report.train_acc:.4f}  val_acc: {report.val_acc:.4f}")
    click.echo(f"model written to {out}")


@cli.command()
@click.option("--stream", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--wrist-model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--elbow-model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--repetitions", default=1, show_default=True)
@click.option("--json", "json_out", is_flag=True, help="machine-readable output")
def bench(stream, wrist_model, elbow_model, config_path, repetitions, json_out) -> None:
    """Per-frame engine latency (classify + feedback + accumulate only)."""
    config = _load_engine_config(config_path)
    wrist, elbow = _load_models(wrist_model, elbow_model)
    packets = list(_read_packets(stream))
    if not packets:
        raise CelloEvalError("empty stream")

    runs = []
    for _ in range(repetitions):
        runner = SessionRunner(wrist, elbow, config)
        durations_us = []
        for packet in packets:
            t0 = time.perf_counter_ns()
            runner.process(packet)
            durations_us.append((time.perf_counter_ns() - t0) / 1000.0)
        runs.append(latency_stats(durations_us))

    aggregate = latency_stats([d for r in runs for d in r["durations_us"]])
    if json_out:
        payload = {
            "runs": [{k: v for k, v in r.items() if k != "durations_us"} for r in runs],
            "aggregate": {k: v for k, v in aggregate.items() if k != "durations_us"},
        }
        click.echo(json.dumps(payload))
    else:
        for i, r in enumerate(runs, 1):
            click.echo(_format_stats(f"run {i}", r))
        click.echo(_format_stats("aggregate", aggregate))


def latency_stats(durations_us: list[float]) -> dict:
    ordered = sorted(durations_us)

    def pct(q: float) -> float:
        return ordered[min(len(ordered) - 1, int(round(q * (len(ordered) - 1))))]

    mean = statistics.fmean(durations_us)
    return {
        "frames": len(durations_us),
        "mean_us": mean,
        "p50_us": pct(0.50),
        "p95_us": pct(0.95),
        "p99_us": pct(0.99),
        "fps": 1e6 / mean,
        "durations_us": durations_us,
    }


def _format_stats(label: str, s: dict) -> str:
    return (
        f"{label}: {s['frames']} frames  mean {s['mean_us']:.1f} us  "
        f"p50 {s['p50_us']:.1f} us  p95 {s['p95_us']:.1f} us  "
        f"p99 {s['p99_us']:.1f} us  ({s['fps']:.0f} fps)"
    )


@cli.command()
@click.option("--listen", default="127.0.0.1:8000", show_default=True)
@click.option("--wrist-model", required=True, type=click.Path(dir_okay=False))
@click.option("--elbow-model", required=True, type=click.Path(dir_okay=False))
@click.option("--store", required=True, type=click.Path(file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
def serve(listen, wrist_model, elbow_model, store, config_path) -> None:
    """Run the live session service."""
    import uvicorn

    from .service import create_app
    from .session import SessionStore

    for path in (wrist_model, elbow_model):
        if not Path(path).is_file():
            raise CelloEvalError(f"model file not found: {path}")
    config = _load_engine_config(config_path)
    wrist, elbow = _load_models(wrist_model, elbow_model)
    app = create_app(wrist, elbow, SessionStore(store), config)
    host, _, port = listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    except (CelloEvalError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except KeyboardInterrupt:
        sys.exit(0)
    except Exception as exc:  # pragma: no cover
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
