"""From-scratch feedforward network mapping embeddings to distributions over states.

Architecture: input -> inverted dropout -> hidden ReLU layer -> softmax output.
Trained with softmax cross-entropy against normalized successor rows, plain
SGD with momentum, analytic backprop. Everything is driven by one seeded
generator so a (config, examples) pair determines the trained model bitwise.
"""

from dataclasses import dataclass, asdict

import numpy as np

from .errors import InputError, TrainingError
from .fileio import dump_json, load_json

LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class MlpConfig:
    input_dim: int
    output_dim: int
    hidden_dim: int = 128
    dropout_rate: float = 0.8
    learning_rate: float = 1e-5
    epochs: int = 500
    batch_size: int = 20
    momentum: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.input_dim < 1 or self.hidden_dim < 1 or self.output_dim < 1:
            raise InputError("layer sizes must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InputError(f"dropout rate must be in [0, 1), got {self.dropout_rate}")
        if self.learning_rate < 0.0:
            raise InputError(f"learning rate must be non-negative, got {self.learning_rate}")
        if self.epochs < 1:
            raise InputError(f"epochs must be positive, got {self.epochs}")
        if self.batch_size < 1:
            raise InputError(f"batch size must be positive, got {self.batch_size}")
        if not 0.0 <= self.momentum < 1.0:
            raise InputError(f"momentum must be in [0, 1), got {self.momentum}")


@dataclass
class MlpModel:
    w1: np.ndarray  # hidden x input
    b1: np.ndarray
    w2: np.ndarray  # output x hidden
    b2: np.ndarray
    config: MlpConfig


@dataclass
class TrainReport:
    loss_per_epoch: list
    final_train_loss: float
    seed: int


def _init_params(config, rng):
    # uniform(+-sqrt(6/(fan_in+fan_out))) per weight matrix, zero biases
    lim1 = np.sqrt(6.0 / (config.input_dim + config.hidden_dim))
    w1 = rng.uniform(-lim1, lim1, size=(config.hidden_dim, config.input_dim))
    lim2 = np.sqrt(6.0 / (config.hidden_dim + config.output_dim))
    w2 = rng.uniform(-lim2, lim2, size=(config.output_dim, config.hidden_dim))
    return MlpModel(w1=w1, b1=np.zeros(config.hidden_dim),
                    w2=w2, b2=np.zeros(config.output_dim), config=config)


def init_model(config):
    """Seeded initial model; `train` starts from exactly these parameters."""
    return _init_params(config, np.random.default_rng(config.seed))


def _softmax(z):
    e = np.exp(z - np.max(z, axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def forward(model, x, mode="inference", mask=None):
    """Single-vector forward pass: softmax(w2 relu(w1 dropout(x) + b1) + b2).

    In "train-with-mask" mode the given dropout mask is applied with the
    inverted-dropout convention (survivors scaled by 1/(1-rate)); inference
    mode leaves the input untouched.
    """
    cfg = model.config
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (cfg.input_dim,):
        raise InputError(f"input has {x.size} components, expected {cfg.input_dim}")
    if mode in ("train", "train-with-mask"):
        if mask is None:
            raise InputError("train mode requires a dropout mask")
        mask = np.asarray(mask, dtype=np.float64)
        if mask.shape != x.shape:
            raise InputError("dropout mask shape must match the input")
        x = x * mask / (1.0 - cfg.dropout_rate)
    elif mode != "inference":
        raise InputError(f"unknown forward mode {mode!r}")
    h = np.maximum(model.w1 @ x + model.b1, 0.0)
    return _softmax(model.w2 @ h + model.b2)


def loss(prediction, target):
    """Cross-entropy -sum t_j ln p_j with predictions clamped at 1e-12."""
    prediction = np.asarray(prediction, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    return float(-np.sum(target * np.log(np.maximum(prediction, LOG_CLAMP))))


def loss_gradients(model, x, target):
    """Analytic cross-entropy gradients for one example with dropout disabled."""
    x = np.asarray(x, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    z1 = model.w1 @ x + model.b1
    h = np.maximum(z1, 0.0)
    p = _softmax(model.w2 @ h + model.b2)
    dz2 = p - target
    dh = model.w2.T @ dz2
    dz1 = dh * (z1 > 0)
    return {"w1": np.outer(dz1, x), "b1": dz1, "w2": np.outer(dz2, h), "b2": dz2}


def gradient_check(config, example, epsilon=1e-5):
    """Max relative error of analytic vs central finite-difference gradients.

    Runs on a freshly initialized model with dropout disabled; the error for
    each parameter is |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
    """
    x, target = example
    x = np.asarray(x, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    model = init_model(config)
    grads = loss_gradients(model, x, target)
    worst = 0.0
    for name in ("w1", "b1", "w2", "b2"):
        param = getattr(model, name).ravel()
        grad = grads[name].ravel()
        for i in range(param.size):
            orig = param[i]
            param[i] = orig + epsilon
            hi = loss(forward(model, x), target)
            param[i] = orig - epsilon
            lo = loss(forward(model, x), target)
            param[i] = orig
            numeric = (hi - lo) / (2.0 * epsilon)
            err = abs(grad[i] - numeric) / max(1e-8, abs(grad[i]) + abs(numeric))
            worst = max(worst, err)
    return worst


def train(config, examples):
    """Train against an ExampleSet; returns (model, per-epoch mean loss report).

    Each epoch shuffles the examples with the seeded generator, walks batches
    of `batch_size` (last batch may be short), draws a fresh dropout mask per
    example presentation, and applies one SGD-with-momentum step per batch on
    the mean batch loss. Aborts on non-finite loss or parameters.
    """
    n = len(examples)
    if n == 0:
        raise InputError("cannot train on an empty example set")
    if examples.inputs.shape[1] != config.input_dim:
        raise InputError(f"examples have input dim {examples.inputs.shape[1]}, "
                         f"config says {config.input_dim}")
    if examples.targets.shape[1] != config.output_dim:
        raise InputError(f"examples have target dim {examples.targets.shape[1]}, "
                         f"config says {config.output_dim}")

    rng = np.random.default_rng(config.seed)
    model = _init_params(config, rng)
    vel = {"w1": np.zeros_like(model.w1), "b1": np.zeros_like(model.b1),
           "w2": np.zeros_like(model.w2), "b2": np.zeros_like(model.b2)}
    keep = 1.0 - config.dropout_rate
    inputs, targets = examples.inputs, examples.targets
    losses = []

    for epoch in range(config.epochs):
        order = rng.permutation(n)
        loss_sum = 0.0
        for lo in range(0, n, config.batch_size):
            idx = order[lo:lo + config.batch_size]
            xb = inputs[idx]
            tb = targets[idx]
            mask = (rng.random(xb.shape) >= config.dropout_rate).astype(np.float64)
            xs = xb * mask / keep

            z1 = xs @ model.w1.T + model.b1
            h = np.maximum(z1, 0.0)
            p = _softmax(h @ model.w2.T + model.b2)
            example_losses = -np.sum(tb * np.log(np.maximum(p, LOG_CLAMP)), axis=1)
            batch_loss = float(example_losses.mean())
            if not np.isfinite(batch_loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}")
            loss_sum += float(example_losses.sum())

            m = len(idx)
            dz2 = (p - tb) / m
            grads = {"w2": dz2.T @ h, "b2": dz2.sum(axis=0)}
            dz1 = (dz2 @ model.w2) * (z1 > 0)
            grads["w1"] = dz1.T @ xs
            grads["b1"] = dz1.sum(axis=0)
            for name, g in grads.items():
                vel[name] = config.momentum * vel[name] - config.learning_rate * g
                param = getattr(model, name)
                param += vel[name]

        for name in vel:
            if not np.all(np.isfinite(getattr(model, name))):
                raise TrainingError(f"non-finite parameter {name} at epoch {epoch}")
        losses.append(loss_sum / n)

    return model, TrainReport(loss_per_epoch=losses, final_train_loss=losses[-1],
                              seed=config.seed)


def predict_all(model, table, words):
    """Inference-mode distributions for each word, order preserved."""
    cfg = model.config
    if not words:
        return np.zeros((0, cfg.output_dim))
    vecs = np.stack([table[w] for w in words])
    if vecs.shape[1] != cfg.input_dim:
        raise InputError(f"embeddings have dim {vecs.shape[1]}, model expects {cfg.input_dim}")
    h = np.maximum(vecs @ model.w1.T + model.b1, 0.0)
    return _softmax(h @ model.w2.T + model.b2)


def save_model(model, path):
    """Checkpoint config plus all parameters at 17 significant digits."""
    dump_json({"config": asdict(model.config), "w1": model.w1, "b1": model.b1,
               "w2": model.w2, "b2": model.b2}, path)


def load_model(path):
    doc = load_json(path)
    try:
        config = MlpConfig(**doc["config"])
        model = MlpModel(w1=np.array(doc["w1"], dtype=np.float64),
                         b1=np.array(doc["b1"], dtype=np.float64),
                         w2=np.array(doc["w2"], dtype=np.float64),
                         b2=np.array(doc["b2"], dtype=np.float64),
                         config=config)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed model checkpoint ({exc})") from None
    if model.w1.shape != (config.hidden_dim, config.input_dim) or \
            model.w2.shape != (config.output_dim, config.hidden_dim):
        raise InputError(f"{path}: checkpoint shapes do not match its config")
    return model
