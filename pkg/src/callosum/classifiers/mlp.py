"""Multilayer perceptron: sigmoid units throughout, trained by
backpropagation on binary cross-entropy with plain gradient descent.

mlp_forward evaluates the bare network; scaling (stored on the model) is
applied by predict(). Training is functional: each step returns a new model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from ..feature_table import ASD, CONTROL, ScalingStats
from .common import MlpConfig, Prediction

_CLIP = 1e-12  # keeps log() finite in the loss


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -60.0, 60.0)))


@dataclass(eq=False)
class MlpModel:
    weights: tuple  # per layer, shape (fan_in, fan_out)
    biases: tuple   # per layer, shape (fan_out,)
    scaler: ScalingStats | None
    feature_names: tuple[str, ...]

    @property
    def n_inputs(self) -> int:
        return self.weights[0].shape[0]


def init_model(n_inputs: int, hidden, seed: int, scaler=None,
               feature_names=()) -> MlpModel:
    rng = np.random.default_rng(seed)
    sizes = [n_inputs, *hidden, 1]
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        weights.append(rng.normal(0.0, 1.0 / np.sqrt(fan_in), (fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(weights=tuple(weights), biases=tuple(biases),
                    scaler=scaler, feature_names=tuple(feature_names))


def mlp_forward(model: MlpModel, x):
    """(per-layer activations, output column). activations[0] is the input."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    if a.shape[1] != model.n_inputs:
        raise DimensionMismatch(
            f"expected {model.n_inputs} inputs, got {a.shape[1]}")
    activations = [a]
    for w, b in zip(model.weights, model.biases):
        a = sigmoid(a @ w + b)
        activations.append(a)
    return activations, activations[-1]


def bce_loss(p, targets) -> float:
    p = np.clip(p, _CLIP, 1.0 - _CLIP)
    t = np.asarray(targets, dtype=float).reshape(p.shape)
    return float(-(t * np.log(p) + (1.0 - t) * np.log(1.0 - p)).mean())


def loss_and_gradients(model: MlpModel, x, targets):
    """Mean cross-entropy plus analytic gradients for every weight and bias."""
    activations, out = mlp_forward(model, x)
    t = np.asarray(targets, dtype=float).reshape(out.shape)
    m = out.shape[0]
    loss = bce_loss(out, t)
    delta = (out - t) / m  # sigmoid output + cross-entropy
    grads_w = []
    grads_b = []
    for layer in range(len(model.weights) - 1, -1, -1):
        a_prev = activations[layer]
        grads_w.append(a_prev.T @ delta)
        grads_b.append(delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ model.weights[layer].T) * a_prev * (1.0 - a_prev)
    grads_w.reverse()
    grads_b.reverse()
    return loss, grads_w, grads_b


def mlp_train_epoch(model: MlpModel, x, targets, lr: float):
    """One gradient step on the given batch.

    Returns (stepped model, mean loss before the step). lr=0 returns an
    identical model.
    """
    loss, grads_w, grads_b = loss_and_gradients(model, x, targets)
    weights = tuple(w - lr * g for w, g in zip(model.weights, grads_w))
    biases = tuple(b - lr * g for b, g in zip(model.biases, grads_b))
    return MlpModel(weights=weights, biases=biases, scaler=model.scaler,
                    feature_names=model.feature_names), loss


def fit(config: MlpConfig, x, y, feature_names) -> MlpModel:
    x = np.asarray(x, dtype=float)
    scaler = ScalingStats.from_matrix(x)
    xs = scaler.apply(x)
    targets = np.asarray(y, dtype=float).reshape(-1, 1)
    model = init_model(xs.shape[1], config.hidden, config.seed,
                       scaler=scaler, feature_names=feature_names)
    n = xs.shape[0]
    rng = np.random.default_rng(config.seed + 1)
    for _ in range(config.epochs):
        if config.batch and config.batch < n:
            order = rng.permutation(n)
            for start in range(0, n, config.batch):
                rows = order[start:start + config.batch]
                model, _ = mlp_train_epoch(model, xs[rows], targets[rows],
                                           config.lr)
        else:
            model, _ = mlp_train_epoch(model, xs, targets, config.lr)
    return model


def predict(model: MlpModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(model.feature_names),):
        raise DimensionMismatch(
            f"expected {len(model.feature_names)} features, got {x.shape}")
    if model.scaler is not None:
        x = model.scaler.apply(x[None, :])[0]
    _, out = mlp_forward(model, x)
    score = float(out[0, 0])
    return Prediction(label=ASD if score > 0.5 else CONTROL, score=score)
