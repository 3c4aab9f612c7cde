"""Deterministic synthetic datasets for the two posture classifiers.

The real labeled footage is not available, so these generators produce
geometrically plausible stand-ins with analytic labels: wrist samples are a
canonical hand template rotated into a class-dependent band, elbow samples
are arm triplets whose upper-arm elevation falls in a class band. The band
edges are configuration, not ground truth; they exist to exercise the
training and inference contract, not to model cellists.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources

import numpy as np

from .features import elbow_features, normalize_hand
from .mlp import LabeledDataset
from .streams import PoseTriplet


class SynthTask(Enum):
    WRIST = "wrist"
    ELBOW = "elbow"


@dataclass(frozen=True)
class SynthSpec:
    task: SynthTask
    n_per_class: int
    noise_sigma: float = 0.03
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")


WRIST_CLASSES = ["normal", "supinated", "over_pronated"]
ELBOW_CLASSES = ["normal", "too_low", "too_high"]

# Rotation of the hand template about the origin node, degrees.
WRIST_BANDS_DEG = {"normal": (-10.0, 10.0), "supinated": (25.0, 45.0), "over_pronated": (-45.0, -25.0)}
# Upper-arm elevation above image-horizontal, degrees (positive = elbow higher on screen).
ELBOW_BANDS_DEG = {"normal": (-10.0, 10.0), "too_low": (-40.0, -20.0), "too_high": (20.0, 40.0)}


def hand_template() -> np.ndarray:
    """The canonical 21x2 hand template (origin node at (0, 0))."""
    raw = json.loads(resources.files("cello_eval.data").joinpath("hand_template.json").read_text())
    return np.asarray(raw["points"], dtype=float)


def rotate_hand(points: np.ndarray, angle_deg: float) -> np.ndarray:
    """Rotate all points about the origin node (index 0)."""
    t = math.radians(angle_deg)
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    origin = points[0]
    return (points - origin) @ rot.T + origin


def _wrist_sample(rng: np.random.Generator, band: tuple[float, float], sigma: float) -> tuple[np.ndarray, float]:
    template = _TEMPLATE
    angle = rng.uniform(*band)
    pts = rotate_hand(template, angle)
    # Random placement in frame; normalize_hand removes it again.
    pts = pts + rng.uniform(0.3, 0.7, size=2)
    pts = pts + rng.normal(0.0, sigma, size=pts.shape)
    return normalize_hand(pts), angle


def _direction(elevation_deg: float, azimuth_deg: float) -> np.ndarray:
    """Unit 3D direction; positive elevation points up-screen (negative y)."""
    el = math.radians(elevation_deg)
    az = math.radians(azimuth_deg)
    return np.array([math.cos(el) * math.cos(az), -math.sin(el), math.cos(el) * math.sin(az)])


def _elbow_sample(rng: np.random.Generator, band: tuple[float, float], sigma: float) -> tuple[np.ndarray, float]:
    elevation = rng.uniform(*band)
    shoulder = np.zeros(3)
    upper_len = rng.uniform(0.55, 0.75)
    elbow = shoulder + upper_len * _direction(elevation, rng.uniform(-30.0, 30.0))
    fore_len = rng.uniform(0.45, 0.65)
    wrist = elbow + fore_len * _direction(rng.uniform(-50.0, 10.0), rng.uniform(-60.0, 60.0))
    noisy = [p + rng.normal(0.0, sigma, size=3) for p in (shoulder, elbow, wrist)]
    pose = PoseTriplet(*(tuple(p) for p in noisy))
    return elbow_features(pose), elevation


_TEMPLATE = hand_template()


def generate(spec: SynthSpec) -> LabeledDataset:
    """Labeled dataset with exactly n_per_class samples per class.

    Deterministic given the spec: the same spec yields an identical dataset.
    """
    rng = np.random.default_rng(spec.seed)
    if spec.task is SynthTask.WRIST:
        classes, bands, sampler = WRIST_CLASSES, WRIST_BANDS_DEG, _wrist_sample
    else:
        classes, bands, sampler = ELBOW_CLASSES, ELBOW_BANDS_DEG, _elbow_sample
    inputs, labels = [], []
    for label, name in enumerate(classes):
        for _ in range(spec.n_per_class):
            vec, _param = sampler(rng, bands[name], spec.noise_sigma)
            inputs.append(vec)
            labels.append(label)
    return LabeledDataset(np.asarray(inputs), np.asarray(labels), list(classes))


def write_dataset(dataset: LabeledDataset, sink) -> None:
    """One JSON record per sample: {"features": [...], "label": int}."""
    for vec, label in zip(dataset.inputs, dataset.labels):
        sink.write(json.dumps({"features": vec.tolist(), "label": int(label)}) + "\n")


def read_dataset(source, class_labels: list[str]) -> LabeledDataset:
    inputs, labels = [], []
    for line in source:
        if not line.strip():
            continue
        rec = json.loads(line)
        inputs.append(rec["features"])
        labels.append(rec["label"])
    return LabeledDataset(np.asarray(inputs, dtype=float), np.asarray(labels), class_labels)
