"""Feedforward cut classifier: 6 -> 12 -> 12 -> 6 -> 1, 325 parameters.

Inference and training are native numpy.  Inputs are mean-variance
normalized per circuit (one batch per design, statistics never stored with
the model); hidden layers are rectified, the output is logistic.  Training
minimizes binary cross-entropy with Adam under cosine annealing with warm
restarts, class-weighted sampling with replacement, per-batch MixUp, and
early stopping on a stratified validation split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LAYER_DIMS = (6, 12, 12, 6, 1)
_NORM_EPS = 1e-8
MODEL_MAGIC = "ELF-MLP 1"


@dataclass
class Mlp:
    weights: list[np.ndarray]   # per layer, shape (fan_in, fan_out)
    biases: list[np.ndarray]    # per layer, shape (fan_out,)

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "Mlp":
        return Mlp([w.copy() for w in self.weights],
                   [b.copy() for b in self.biases])


@dataclass
class TrainConfig:
    batch_size: int = 64
    max_epochs: int = 30
    patience: int = 10
    learning_rate: float = 0.1
    mixup_alpha: float = 0.2
    restart_period: int = 10   # warm-restart period in epochs
    restart_mult: int = 2
    min_lr: float = 0.0
    val_fraction: float = 0.1
    seed: int = 0


@dataclass
class Metrics:
    tp: int
    tn: int
    fp: int
    fn: int
    recall: float      # percent
    accuracy: float    # percent


def init_xavier(seed: int = 0) -> Mlp:
    """Uniform Xavier weights in +-sqrt(6/(fan_in+fan_out)), zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fi, fo in zip(LAYER_DIMS[:-1], LAYER_DIMS[1:]):
        limit = math.sqrt(6.0 / (fi + fo))
        weights.append(rng.uniform(-limit, limit, size=(fi, fo)))
        biases.append(np.zeros(fo))
    return Mlp(weights, biases)


def normalize_batch(matrix: np.ndarray) -> np.ndarray:
    """Per-column (x - mean) / sqrt(var + eps) over this batch alone."""
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != LAYER_DIMS[0]:
        raise ValueError(f"expected an (n, {LAYER_DIMS[0]}) matrix")
    mean = x.mean(axis=0)
    var = x.var(axis=0)
    return (x - mean) / np.sqrt(var + _NORM_EPS)


def _logits(model: Mlp, batch: np.ndarray) -> np.ndarray:
    a = np.asarray(batch, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != LAYER_DIMS[0]:
        raise ValueError(f"expected an (n, {LAYER_DIMS[0]}) batch")
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        a = a @ w + b
        if i != last:
            np.maximum(a, 0.0, out=a)
    return a[:, 0]


def forward(model: Mlp, batch: np.ndarray) -> np.ndarray:
    """Probabilities in [0, 1], one per row, whole batch in one call."""
    z = _logits(model, batch)
    return 1.0 / (1.0 + np.exp(-z))


def evaluate(model: Mlp, batch: np.ndarray, labels, threshold: float = 0.5) -> Metrics:
    """Confusion counts of thresholded predictions against 0/1 labels."""
    probs = forward(model, batch)
    y = np.asarray(labels)
    pred = probs >= threshold
    pos = y == 1
    tp = int(np.sum(pred & pos))
    tn = int(np.sum(~pred & ~pos))
    fp = int(np.sum(pred & ~pos))
    fn = int(np.sum(~pred & pos))
    return metrics_from_counts(tp, tn, fp, fn)


def metrics_from_counts(tp: int, tn: int, fp: int, fn: int) -> Metrics:
    recall = 100.0 * tp / (tp + fn) if tp + fn else 100.0
    total = tp + tn + fp + fn
    accuracy = 100.0 * (tp + tn) / total if total else 100.0
    return Metrics(tp, tn, fp, fn, recall, accuracy)


# -- training ----------------------------------------------------------------

def _forward_trace(model: Mlp, x):
    acts = [x]
    last = len(model.weights) - 1
    zs = []
    a = x
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        zs.append(z)
        a = np.maximum(z, 0.0) if i != last else z
        acts.append(a)
    return acts, zs


def _bce_from_logits(z: np.ndarray, y: np.ndarray) -> float:
    # softplus(z) - y*z, numerically stable
    return float(np.mean(np.maximum(z, 0) + np.log1p(np.exp(-np.abs(z))) - y * z))


def bce_loss(model: Mlp, batch: np.ndarray, labels) -> float:
    return _bce_from_logits(_logits(model, batch), np.asarray(labels, dtype=np.float64))


def _backward(model: Mlp, x, y):
    """Gradients of mean BCE over the batch, via the logistic output."""
    acts, zs = _forward_trace(model, x)
    n = x.shape[0]
    p = 1.0 / (1.0 + np.exp(-zs[-1][:, 0]))
    delta = ((p - y) / n)[:, None]
    grads_w, grads_b = [], []
    for i in range(len(model.weights) - 1, -1, -1):
        grads_w.append(acts[i].T @ delta)
        grads_b.append(delta.sum(axis=0))
        if i:
            delta = (delta @ model.weights[i].T) * (zs[i - 1] > 0)
    grads_w.reverse()
    grads_b.reverse()
    return grads_w, grads_b


def _restart_lr(epoch_frac: float, cfg: TrainConfig) -> float:
    t, period = epoch_frac, float(cfg.restart_period)
    while t >= period:
        t -= period
        period *= cfg.restart_mult
    return cfg.min_lr + (cfg.learning_rate - cfg.min_lr) * 0.5 * (
        1.0 + math.cos(math.pi * t / period))


def _split_stratified(y, fraction, rng):
    val = []
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        n_val = min(max(1, round(fraction * len(idx))), len(idx) - 1) \
            if len(idx) > 1 else 0
        val.extend(idx[:n_val])
    val = np.sort(np.asarray(val, dtype=np.intp))
    train = np.setdiff1d(np.arange(len(y)), val)
    return train, val


def train(features: np.ndarray, labels, config: TrainConfig | None = None) -> Mlp:
    """Fit the classifier; deterministic per seed, best-validation weights.

    `features` must already be normalized (per design).  Each epoch draws
    len(train) samples with replacement, weighted inversely to class
    frequency, and mixes each batch with Beta(alpha, alpha) coefficients.
    Stops early after `patience` epochs without validation improvement.
    """
    cfg = config or TrainConfig()
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != LAYER_DIMS[0]:
        raise ValueError(f"expected an (n, {LAYER_DIMS[0]}) feature matrix")
    if len(x) == 0:
        raise ValueError("empty dataset")
    if len(np.unique(y)) < 2:
        raise ValueError("training needs both classes")

    rng = np.random.default_rng(cfg.seed)
    tr_idx, val_idx = _split_stratified(y, cfg.val_fraction, rng)
    xt, yt = x[tr_idx], y[tr_idx]
    xv, yv = x[val_idx], y[val_idx]

    counts = np.array([np.sum(yt == 0), np.sum(yt == 1)], dtype=np.float64)
    sample_p = (1.0 / counts)[yt.astype(np.intp)]
    sample_p /= sample_p.sum()

    model = init_xavier(cfg.seed)
    adam_m = [np.zeros_like(w) for w in model.weights] + \
             [np.zeros_like(b) for b in model.biases]
    adam_v = [np.zeros_like(p) for p in adam_m]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0

    n_train = len(xt)
    batches = max(1, math.ceil(n_train / cfg.batch_size))
    best_loss = math.inf
    best = model.copy()
    stale = 0
    for epoch in range(cfg.max_epochs):
        order = rng.choice(n_train, size=n_train, replace=True, p=sample_p)
        for bi in range(batches):
            sel = order[bi * cfg.batch_size:(bi + 1) * cfg.batch_size]
            xb, yb = xt[sel], yt[sel]
            if cfg.mixup_alpha > 0:
                lam = rng.beta(cfg.mixup_alpha, cfg.mixup_alpha)
                perm = rng.permutation(len(sel))
                xb = lam * xb + (1 - lam) * xb[perm]
                yb = lam * yb + (1 - lam) * yb[perm]
            lr = _restart_lr(epoch + bi / batches, cfg)
            gw, gb = _backward(model, xb, yb)
            step += 1
            params = model.weights + model.biases
            grads = gw + gb
            c1 = 1 - beta1 ** step
            c2 = 1 - beta2 ** step
            for p, g, m, v in zip(params, grads, adam_m, adam_v):
                m *= beta1
                m += (1 - beta1) * g
                v *= beta2
                v += (1 - beta2) * g * g
                p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)
        val_loss = bce_loss(model, xv, yv) if len(xv) else bce_loss(model, xt, yt)
        if val_loss < best_loss:
            best_loss = val_loss
            best = model.copy()
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                break
    return best


# -- serialization -------------------------------------------------------------

def save_model(model: Mlp) -> bytes:
    """Text format: magic, layer dims, then per layer row-major weights and
    biases as whitespace-separated decimal floats."""
    lines = [MODEL_MAGIC, " ".join(str(d) for d in LAYER_DIMS)]
    for w, b in zip(model.weights, model.biases):
        for row in w:
            lines.append(" ".join(repr(x) for x in row))
        lines.append(" ".join(repr(x) for x in b))
    return ("\n".join(lines) + "\n").encode("ascii")


class ModelFormatError(ValueError):
    pass


def load_model(data: bytes) -> Mlp:
    text = data.decode("ascii", errors="replace")
    lines = text.splitlines()
    if not lines or lines[0].strip() != MODEL_MAGIC:
        raise ModelFormatError("bad magic line")
    if len(lines) < 2:
        raise ModelFormatError("missing dimension line")
    try:
        dims = tuple(int(t) for t in lines[1].split())
    except ValueError:
        raise ModelFormatError("bad dimension line") from None
    if dims != LAYER_DIMS:
        raise ModelFormatError(f"unsupported layer dims {dims}")
    tokens = "\n".join(lines[2:]).split()
    try:
        values = [float(t) for t in tokens]
    except ValueError:
        raise ModelFormatError("non-numeric parameter") from None
    expected = sum(fi * fo + fo for fi, fo in zip(dims[:-1], dims[1:]))
    if len(values) != expected:
        raise ModelFormatError(
            f"parameter count mismatch: got {len(values)}, need {expected}")
    weights, biases, at = [], [], 0
    for fi, fo in zip(dims[:-1], dims[1:]):
        weights.append(np.array(values[at:at + fi * fo]).reshape(fi, fo))
        at += fi * fo
        biases.append(np.array(values[at:at + fo]))
        at += fo
    return Mlp(weights, biases)
