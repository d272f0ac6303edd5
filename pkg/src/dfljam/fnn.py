"""Feedforward classifier trained from scratch: ReLU hidden layers, softmax
output, cross-entropy loss, RMSprop updates, inverted dropout, and the
element-wise model averaging used for federation. Double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

# ModelParams: list of (weights (out, in), biases (out,)) per layer.
ModelParams = list[tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class FnnSpec:
    input_size: int = 32
    hidden_sizes: tuple[int, ...] = (128, 64, 32)
    output_size: int = 2
    dropout_rate: float = 0.2

    def __post_init__(self):
        if min((self.input_size, self.output_size, *self.hidden_sizes), default=1) <= 0:
            raise ValueError("layer sizes must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")

    def layer_sizes(self) -> list[int]:
        return [self.input_size, *self.hidden_sizes, self.output_size]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    rms_decay: float = 0.9
    rms_epsilon: float = 1e-7
    batch_size: int = 32
    epochs_per_round: int = 1

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if not 0.0 < self.rms_decay < 1.0:
            raise ValueError("rms_decay must be in (0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


def param_count(spec: FnnSpec) -> int:
    sizes = spec.layer_sizes()
    return sum(i * o + o for i, o in zip(sizes[:-1], sizes[1:]))


def init(spec: FnnSpec, rng: np.random.Generator) -> ModelParams:
    """Uniform fan-in/fan-out weight init, zero biases."""
    params = []
    sizes = spec.layer_sizes()
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        b = np.zeros(fan_out)
        params.append((w, b))
    return params


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _forward_cached(params, x, dropout_rate, rng):
    """Activations per layer plus the dropout masks used, for backprop."""
    activations = [x]
    masks = []
    a = x
    last = len(params) - 1
    for idx, (w, b) in enumerate(params):
        z = a @ w.T + b
        if idx == last:
            a = _softmax(z)
            masks.append(None)
        else:
            a = np.maximum(z, 0.0)
            if dropout_rate > 0.0:
                keep = rng.random(a.shape) >= dropout_rate
                a = a * keep / (1.0 - dropout_rate)
                masks.append(keep)
            else:
                masks.append(None)
        activations.append(a)
    return activations, masks


def forward(params: ModelParams, features, dropout_rate: float = 0.0, rng: np.random.Generator | None = None) -> np.ndarray:
    """Class probabilities for one feature vector or a batch of them.

    Pass a dropout rate and an rng for training-mode inverted dropout;
    the default is the evaluation path (no dropout, no rescaling).
    """
    x = np.asarray(features, dtype=np.float64)
    if x.shape[-1] != params[0][0].shape[1]:
        raise ValueError(f"expected {params[0][0].shape[1]} features, got {x.shape[-1]}")
    if dropout_rate > 0.0 and rng is None:
        raise ValueError("training-mode forward needs an rng for dropout masks")
    activations, _ = _forward_cached(params, x, dropout_rate, rng)
    return activations[-1]


def mean_cross_entropy(params: ModelParams, x, y) -> float:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    a = x
    for idx, (w, b) in enumerate(params):
        z = a @ w.T + b
        a = np.maximum(z, 0.0) if idx < len(params) - 1 else z
    log_p = _log_softmax(a)
    return float(-log_p[np.arange(len(y)), y].mean())


def _loss_and_grads(params, x, y, dropout_rate, rng):
    n = x.shape[0]
    activations, masks = _forward_cached(params, x, dropout_rate, rng)
    probs = activations[-1]
    eps = np.finfo(np.float64).tiny
    loss = float(-np.log(probs[np.arange(n), y] + eps).mean())

    grads = []
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    for idx in range(len(params) - 1, -1, -1):
        a_prev = activations[idx]
        grads.append((delta.T @ a_prev, delta.sum(axis=0)))
        if idx > 0:
            w = params[idx][0]
            delta = delta @ w
            if masks[idx - 1] is not None:
                delta = delta * masks[idx - 1] / (1.0 - dropout_rate)
            delta = delta * (activations[idx] > 0.0)
    grads.reverse()
    return loss, grads


def new_optimizer_state(params: ModelParams) -> list[tuple[np.ndarray, np.ndarray]]:
    return [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]


def train_local(
    params: ModelParams,
    x,
    y,
    config: TrainConfig,
    rng: np.random.Generator,
    opt_state=None,
    dropout_rate: float = 0.2,
):
    """One round of shuffled mini-batch RMSprop on the local data.

    Returns (new params, new optimizer state). The squared-gradient
    accumulators persist across rounds but are never exchanged or averaged.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("cannot train on an empty dataset")
    params = [(w.copy(), b.copy()) for w, b in params]
    state = (
        [(sw.copy(), sb.copy()) for sw, sb in opt_state]
        if opt_state is not None
        else new_optimizer_state(params)
    )
    lr = config.learning_rate
    rho = config.rms_decay
    eps = config.rms_epsilon
    for _ in range(config.epochs_per_round):
        order = rng.permutation(x.shape[0])
        for start in range(0, x.shape[0], config.batch_size):
            batch = order[start : start + config.batch_size]
            _, grads = _loss_and_grads(params, x[batch], y[batch], dropout_rate, rng)
            for layer, (gw, gb) in enumerate(grads):
                w, b = params[layer]
                sw, sb = state[layer]
                sw = rho * sw + (1.0 - rho) * gw * gw
                sb = rho * sb + (1.0 - rho) * gb * gb
                w = w - lr * gw / (np.sqrt(sw) + eps)
                b = b - lr * gb / (np.sqrt(sb) + eps)
                params[layer] = (w, b)
                state[layer] = (sw, sb)
    return params, state


def evaluate(params: ModelParams, x, y) -> float:
    """Fraction of samples whose argmax class matches; ties go to class 0."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("cannot evaluate on an empty sample list")
    probs = forward(params, x)
    predictions = np.argmax(probs, axis=-1)
    return float(np.mean(predictions == y))


def federated_average(models: list[ModelParams]) -> ModelParams:
    """Element-wise mean with uniform weights, summed left to right."""
    if not models:
        raise ValueError("cannot average an empty model list")
    shapes = [(w.shape, b.shape) for w, b in models[0]]
    for m in models[1:]:
        if [(w.shape, b.shape) for w, b in m] != shapes:
            raise ValueError("model shapes do not match")
    count = float(len(models))
    averaged = []
    for layer in range(len(models[0])):
        w_acc = models[0][layer][0].copy()
        b_acc = models[0][layer][1].copy()
        for m in models[1:]:
            w_acc += m[layer][0]
            b_acc += m[layer][1]
        averaged.append((w_acc / count, b_acc / count))
    return averaged


def params_equal(a: ModelParams, b: ModelParams) -> bool:
    return len(a) == len(b) and all(
        np.array_equal(wa, wb) and np.array_equal(ba, bb) for (wa, ba), (wb, bb) in zip(a, b)
    )


def save_params(params: ModelParams, path) -> None:
    """Checkpoint as a flat list of layer arrays with a shape header."""
    arrays = {"layer_count": np.array(len(params), dtype=np.int64)}
    for idx, (w, b) in enumerate(params):
        arrays[f"w{idx}"] = w
        arrays[f"b{idx}"] = b
    with Path(path).open("wb") as fh:
        np.savez(fh, **arrays)


def load_params(path) -> ModelParams:
    with np.load(Path(path)) as data:
        count = int(data["layer_count"])
        return [(data[f"w{idx}"], data[f"b{idx}"]) for idx in range(count)]
