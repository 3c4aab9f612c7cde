"""Minimal multilayer perceptron: forward pass, cross-entropy backprop
training, and a versioned JSON weight-file format.

The two posture classifiers are tiny (about 1100 and 440 parameters), so
everything here is plain numpy with no framework. Input standardization
statistics live inside the model so inference needs no side channel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .errors import CorruptFile, InsufficientData, ShapeMismatch, VersionMismatch

WEIGHT_FILE_VERSION = 1

# Default shapes matching the deployed parameter budgets (1107 and 445).
WRIST_LAYERS = [42, 24, 3]
ELBOW_LAYERS = [9, 34, 3]


@dataclass
class MlpModel:
    layer_sizes: list[int]
    weights: list[np.ndarray]  # shape (n_in, n_out), row-major
    biases: list[np.ndarray]
    feature_means: np.ndarray
    feature_stds: np.ndarray
    class_labels: list[str]

    def __post_init__(self):
        sizes = self.layer_sizes
        if len(sizes) < 2:
            raise ShapeMismatch("need at least input and output layers")
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ShapeMismatch("layer count mismatch")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i], sizes[i + 1]) or b.shape != (sizes[i + 1],):
                raise ShapeMismatch(
                    f"layer {i}: expected {(sizes[i], sizes[i + 1])}, got {w.shape}/{b.shape}"
                )
        if len(self.class_labels) != sizes[-1]:
            raise ShapeMismatch("class_labels must match output size")
        if self.feature_means.shape != (sizes[0],) or self.feature_stds.shape != (sizes[0],):
            raise ShapeMismatch("standardization vectors must match input size")
        if not np.all(self.feature_stds > 0):
            raise ShapeMismatch("feature_stds must be strictly positive")

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 100
    seed: int = 0
    validation_fraction: float = 0.2
    momentum: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.batch_size < 1 or self.epochs < 1:
            raise ValueError("learning_rate, batch_size, epochs must be positive")
        if not (0.0 < self.validation_fraction < 1.0):
            raise ValueError("validation_fraction must be in (0, 1)")


@dataclass
class LabeledDataset:
    inputs: np.ndarray  # (n, d)
    labels: np.ndarray  # (n,) class indices
    class_labels: list[str]

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.inputs.ndim != 2 or len(self.inputs) != len(self.labels):
            raise ShapeMismatch("inputs and labels must have equal length")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= len(self.class_labels)):
            raise ShapeMismatch("label index out of range")


@dataclass
class TrainReport:
    train_acc: float
    val_acc: float
    loss_curve: list[float] = field(default_factory=list)
    param_count: int = 0


def param_count(layer_sizes: list[int]) -> int:
    if len(layer_sizes) < 2:
        raise ValueError("need at least 2 layers")
    return sum(n_in * n_out + n_out for n_in, n_out in zip(layer_sizes, layer_sizes[1:]))


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _forward_batch(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Returns (probabilities, post-activation values per layer incl. input)."""
    a = (x - model.feature_means) / model.feature_stds
    activations = [a]
    n_layers = len(model.weights)
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        a = _softmax(z) if i == n_layers - 1 else np.maximum(z, 0.0)
        activations.append(a)
    return a, activations


def forward(model: MlpModel, x) -> np.ndarray:
    """Class probability vector for one feature vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_size,):
        raise ShapeMismatch(f"expected input of size {model.input_size}, got shape {x.shape}")
    probs, _ = _forward_batch(model, x[None, :])
    return probs[0]


def loss_and_gradients(
    model: MlpModel, inputs: np.ndarray, labels: np.ndarray
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean cross-entropy over the batch and gradients for every parameter."""
    x = np.asarray(inputs, dtype=float)
    y = np.asarray(labels, dtype=int)
    if x.ndim != 2 or x.shape[1] != model.input_size or len(x) != len(y) or len(x) == 0:
        raise ShapeMismatch("bad batch shapes")
    n = len(x)
    probs, activations = _forward_batch(model, x)
    loss = float(-np.mean(np.log(np.maximum(probs[np.arange(n), y], 1e-300))))

    # Backprop: softmax + cross-entropy collapse to (p - onehot)/n.
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grad_w: list[np.ndarray] = [None] * len(model.weights)
    grad_b: list[np.ndarray] = [None] * len(model.biases)
    for i in range(len(model.weights) - 1, -1, -1):
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (activations[i] > 0)
    return loss, grad_w, grad_b


def init_model(
    layer_sizes: list[int],
    class_labels: list[str],
    rng: np.random.Generator,
    feature_means: np.ndarray | None = None,
    feature_stds: np.ndarray | None = None,
) -> MlpModel:
    """Seeded uniform +-sqrt(6/(n_in+n_out)) initialization, zero biases."""
    weights, biases = [], []
    for n_in, n_out in zip(layer_sizes, layer_sizes[1:]):
        limit = math.sqrt(6.0 / (n_in + n_out))
        weights.append(rng.uniform(-limit, limit, size=(n_in, n_out)))
        biases.append(np.zeros(n_out))
    d = layer_sizes[0]
    return MlpModel(
        layer_sizes=list(layer_sizes),
        weights=weights,
        biases=biases,
        feature_means=np.zeros(d) if feature_means is None else feature_means,
        feature_stds=np.ones(d) if feature_stds is None else feature_stds,
        class_labels=list(class_labels),
    )


def _stratified_split(
    labels: np.ndarray, n_classes: int, fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    train_idx, val_idx = [], []
    for c in range(n_classes):
        idx = np.flatnonzero(labels == c)
        if len(idx) < 2:
            raise InsufficientData(f"class {c} has {len(idx)} samples, need at least 2")
        idx = rng.permutation(idx)
        n_val = max(1, int(round(len(idx) * fraction)))
        n_val = min(n_val, len(idx) - 1)
        val_idx.append(idx[:n_val])
        train_idx.append(idx[n_val:])
    return np.concatenate(train_idx), np.concatenate(val_idx)


def _accuracy(model: MlpModel, x: np.ndarray, y: np.ndarray) -> float:
    probs, _ = _forward_batch(model, x)
    return float(np.mean(probs.argmax(axis=1) == y))


def train(
    dataset: LabeledDataset, layer_sizes: list[int], cfg: TrainConfig
) -> tuple[MlpModel, TrainReport]:
    """Deterministic minibatch SGD with a stratified held-out split.

    Standardization statistics are computed on the training split only and
    stored in the returned model.
    """
    x, y = dataset.inputs, dataset.labels
    n_classes = len(dataset.class_labels)
    if layer_sizes[0] != x.shape[1]:
        raise ShapeMismatch(f"layer_sizes[0]={layer_sizes[0]} but features have {x.shape[1]} dims")
    if layer_sizes[-1] != n_classes:
        raise ShapeMismatch("output layer must match class count")
    if len(np.unique(y)) < 2:
        raise InsufficientData("need at least 2 distinct classes")

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = _stratified_split(y, n_classes, cfg.validation_fraction, rng)
    x_train, y_train = x[train_idx], y[train_idx]
    x_val, y_val = x[val_idx], y[val_idx]

    means = x_train.mean(axis=0)
    stds = x_train.std(axis=0)
    stds = np.where(stds < 1e-9, 1.0, stds)

    model = init_model(layer_sizes, dataset.class_labels, rng, means, stds)
    velocity_w = [np.zeros_like(w) for w in model.weights]
    velocity_b = [np.zeros_like(b) for b in model.biases]

    loss_curve: list[float] = []
    n = len(x_train)
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, grad_w, grad_b = loss_and_gradients(model, x_train[batch], y_train[batch])
            epoch_loss += loss
            n_batches += 1
            for i in range(len(model.weights)):
                velocity_w[i] = cfg.momentum * velocity_w[i] - cfg.learning_rate * grad_w[i]
                velocity_b[i] = cfg.momentum * velocity_b[i] - cfg.learning_rate * grad_b[i]
                model.weights[i] = model.weights[i] + velocity_w[i]
                model.biases[i] = model.biases[i] + velocity_b[i]
        loss_curve.append(epoch_loss / n_batches)

    report = TrainReport(
        train_acc=_accuracy(model, x_train, y_train),
        val_acc=_accuracy(model, x_val, y_val),
        loss_curve=loss_curve,
        param_count=param_count(layer_sizes),
    )
    return model, report


def model_to_dict(model: MlpModel) -> dict:
    return {
        "version": WEIGHT_FILE_VERSION,
        "layer_sizes": model.layer_sizes,
        "class_labels": model.class_labels,
        "feature_means": model.feature_means.tolist(),
        "feature_stds": model.feature_stds.tolist(),
        "layers": [
            {"w": w.tolist(), "b": b.tolist()}
            for w, b in zip(model.weights, model.biases)
        ],
    }


def save(model: MlpModel, sink: IO[str]) -> None:
    json.dump(model_to_dict(model), sink)


def load(source: IO[str]) -> MlpModel:
    try:
        raw = json.load(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFile(f"unreadable weight file: {exc}") from None
    if not isinstance(raw, dict) or "version" not in raw:
        raise CorruptFile("weight file missing version")
    if raw["version"] != WEIGHT_FILE_VERSION:
        raise VersionMismatch(f"unsupported weight file version {raw['version']}")
    try:
        model = MlpModel(
            layer_sizes=[int(s) for s in raw["layer_sizes"]],
            weights=[np.asarray(layer["w"], dtype=float) for layer in raw["layers"]],
            biases=[np.asarray(layer["b"], dtype=float) for layer in raw["layers"]],
            feature_means=np.asarray(raw["feature_means"], dtype=float),
            feature_stds=np.asarray(raw["feature_stds"], dtype=float),
            class_labels=[str(c) for c in raw["class_labels"]],
        )
    except (KeyError, TypeError, ValueError, ShapeMismatch) as exc:
        raise CorruptFile(f"inconsistent weight file: {exc}") from None
    return model


def load_path(path) -> MlpModel:
    with open(path, "r", encoding="utf-8") as f:
        return load(f)


def save_path(model: MlpModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        save(model, f)
