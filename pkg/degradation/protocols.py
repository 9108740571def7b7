"""
The three degradation protocols. Each is a pure function of (input, spec):
inputs are never mutated and the same spec always yields the same output.
"""

import logging
import math

import numpy as np
from sklearn.model_selection import train_test_split

from dataset.types import LabeledDataset
from engine.network import Model

from .exceptions import DegradationError, DegradationSpecError
from .types import DegradationKind, DegradationSpec

logger = logging.getLogger(__name__)


def _expect(spec: DegradationSpec, kind: DegradationKind):
    if spec.kind is not kind:
        raise DegradationSpecError(f"expected a {kind.value} spec, got {spec.kind.value}")


def selected_layers(model: Model, spec: DegradationSpec) -> list:
    """Parameterized layers to perturb: ceil(level * L) of them, output end first by default."""
    candidates = model.parameterized_indices()
    count = math.ceil(spec.level * len(candidates) - 1e-9)
    if spec.layer_order == "random":
        order = list(np.random.default_rng(spec.seed).permutation(candidates))
    else:
        order = candidates[::-1]
    return sorted(int(i) for i in order[:count])


def randomize_weights(model: Model, spec: DegradationSpec) -> Model:
    _expect(spec, DegradationKind.RANDOMIZE_WEIGHTS)
    degraded = model.copy()
    rng = np.random.default_rng(spec.seed)
    layers = selected_layers(model, spec)
    for index in layers:
        layer = degraded.layers[index]
        params = layer.params()
        scale = float(np.concatenate([p.ravel() for p in params.values()]).std())
        sigma = spec.noise_sigma * (scale if scale > 0 else 1.0)
        layer.set_params({name: p + rng.normal(0.0, sigma, size=p.shape) for name, p in params.items()})
    degraded.provenance = {**degraded.provenance, "degradation": {**spec.to_dict(), "layers": layers}}
    logger.debug("Randomized layers %s of %s (%s)", layers, model.model_id, spec.label)
    return degraded


def invert_labels(dataset: LabeledDataset, spec: DegradationSpec) -> LabeledDataset:
    """Give a seeded fraction of samples a label drawn uniformly from the other classes."""
    _expect(spec, DegradationKind.INVERT_LABELS)
    n, c = len(dataset), dataset.class_count
    count = int(round(spec.level * n))
    rng = np.random.default_rng(spec.seed)
    chosen = rng.choice(n, size=count, replace=False)
    labels = dataset.labels.copy()
    labels[chosen] = (labels[chosen] + rng.integers(1, c, size=count)) % c
    mask = np.zeros(n, dtype=bool)
    mask[chosen] = True
    original = dataset.original_labels if dataset.original_labels is not None else dataset.labels.copy()
    logger.debug("Inverted %d of %d labels of %s", count, n, dataset.name)
    return dataset.with_labels(labels, mask, original, name=f"{dataset.name}-{spec.label}")


def limit_data(dataset: LabeledDataset, spec: DegradationSpec) -> LabeledDataset:
    """Seeded stratified subsample of ceil(level * N) samples."""
    _expect(spec, DegradationKind.LIMIT_DATA)
    n = len(dataset)
    size = math.ceil(spec.level * n - 1e-9)
    if size >= n:
        return dataset.subset(np.arange(n))
    if size == 0:
        raise DegradationError(f"{spec.label} leaves no samples of {dataset.name}")
    try:
        keep, _ = train_test_split(np.arange(n), train_size=size, random_state=spec.seed, stratify=dataset.labels)
    except ValueError as exc:
        raise DegradationError(f"cannot draw a stratified {spec.label} subsample of {dataset.name}: {exc}") from exc
    limited = dataset.subset(np.sort(keep), name=f"{dataset.name}-{spec.label}")
    present = np.flatnonzero(dataset.class_counts())
    empty = [int(k) for k in present if limited.class_counts()[k] == 0]
    if empty:
        raise DegradationError(f"{spec.label} leaves classes {empty} of {dataset.name} without samples")
    return limited
