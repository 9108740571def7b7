"""
Mini-batch SGD on softmax cross-entropy.

``train`` never touches the model it is given: it trains a deep copy and
returns it with the final accuracies recorded in ``provenance``.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Optional

import numpy as np

from utils.exceptions import ConfigError

from .exceptions import ClassIndexError, EmptyDatasetError, TrainingDivergedError
from .network import Model, accuracy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 0.05
    seed: int = 0
    momentum: float = 0.9

    def __post_init__(self):
        if int(self.epochs) < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs}")
        if int(self.batch_size) < 1:
            raise ConfigError(f"batch_size must be a positive integer, got {self.batch_size}")
        if not np.isfinite(self.learning_rate) or self.learning_rate < 0:
            raise ConfigError(f"learning_rate must be finite and >= 0, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError(f"momentum must lie in [0, 1), got {self.momentum}")

    def to_dict(self):
        return asdict(self)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z, axis=-1, keepdims=True)
    return z - np.log(np.sum(np.exp(z), axis=-1, keepdims=True))


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy of a batch and its gradient with respect to the logits."""
    logits = np.atleast_2d(logits)
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)
    logp = log_softmax(logits)
    loss = float(-np.mean(logp[np.arange(n), labels]))
    grad = np.exp(logp)
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def _arrays(data: Any):
    X = np.asarray(data.images, dtype=np.float64)
    y = np.asarray(data.labels, dtype=np.int64)
    return X, y


def train(model: Model, data: Any, cfg: TrainConfig, test_data: Optional[Any] = None) -> Model:
    """Train a copy of ``model`` on ``data`` (anything with ``images`` and ``labels``)."""
    X, y = _arrays(data)
    n = len(X)
    if n == 0:
        raise EmptyDatasetError("cannot train on an empty dataset")
    if cfg.batch_size > n:
        raise ConfigError(f"batch_size {cfg.batch_size} exceeds dataset size {n}")
    if np.any(y < 0) or np.any(y >= model.class_count):
        raise ClassIndexError(f"labels must lie in [0, {model.class_count})")
    X = model.check_batch(X)

    trained = model.copy()
    rng = np.random.default_rng(cfg.seed)
    velocity = {i: {name: np.zeros_like(p) for name, p in trained.layers[i].params().items()}
                for i in trained.parameterized_indices()}
    loss = float("nan")

    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for batch, start in enumerate(range(0, n, cfg.batch_size)):
            idx = order[start:start + cfg.batch_size]
            activations, caches = trained.forward_batch(X[idx])
            loss, grad = softmax_cross_entropy(activations[-1], y[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, batch, loss, cfg.learning_rate)
            if cfg.learning_rate == 0:
                continue
            _, param_grads = trained.backward_batch(caches, grad, need_params=True)
            for i, grads in enumerate(param_grads):
                if grads is None:
                    continue
                layer = trained.layers[i]
                params = layer.params()
                updated = {}
                for name, g in grads.items():
                    v = cfg.momentum * velocity[i][name] - cfg.learning_rate * g
                    velocity[i][name] = v
                    updated[name] = params[name] + v
                layer.set_params(updated)
        logger.debug("epoch %d/%d loss=%.6f", epoch + 1, cfg.epochs, loss)

    train_acc = accuracy(trained, X, y)
    trained.provenance = {
        **trained.provenance,
        "train_config": cfg.to_dict(),
        "train_size": int(n),
        "final_loss": loss,
        "train_accuracy": train_acc,
    }
    if test_data is not None:
        Xt, yt = _arrays(test_data)
        trained.provenance["test_accuracy"] = accuracy(trained, Xt, yt)
    logger.info(
        "Trained %s on %d samples: train_acc=%.4f test_acc=%s",
        trained.architecture_id, n, train_acc, trained.provenance.get("test_accuracy"),
    )
    return trained
