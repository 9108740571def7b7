"""
Models built from engine layers, forward traces and reverse-mode gradients.

"Class score" everywhere is the pre-softmax logit.
"""

import copy
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import ClassIndexError, LayerTypeError, ShapeMismatchError
from .layers import AvgPool2D, Conv2D, Dense, Flatten, Layer, ReLU, Softplus, layer_from_spec

logger = logging.getLogger(__name__)

ClassIndex = Union[int, Sequence[int], np.ndarray]

# Layer descriptors of the shipped architectures. A dense layer without
# "units" is the classifier head and gets the class count.
ARCHITECTURES: Dict[str, List[Dict[str, Any]]] = {
    "linear": [
        {"type": "flatten"},
        {"type": "dense"},
    ],
    "mlp": [
        {"type": "flatten"},
        {"type": "dense", "units": 32},
        {"type": "relu"},
        {"type": "dense"},
    ],
    "small-cnn": [
        {"type": "conv2d", "filters": 8, "kernel_size": 3},
        {"type": "relu"},
        {"type": "avgpool2d", "size": 2},
        {"type": "conv2d", "filters": 16, "kernel_size": 3},
        {"type": "relu"},
        {"type": "avgpool2d", "size": 2},
        {"type": "flatten"},
        {"type": "dense"},
    ],
}


@dataclass
class ForwardTrace:
    activations: List[np.ndarray]
    logits: np.ndarray

    def __len__(self):
        return len(self.activations)


@dataclass
class Model:
    architecture_id: str
    input_shape: Tuple[int, ...]
    class_count: int
    layers: List[Layer]
    rng_seed: int
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.input_shape = tuple(int(d) for d in self.input_shape)
        shape = self.input_shape
        for index, layer in enumerate(self.layers):
            shape = layer.output_shape(shape, index)
        if shape != (self.class_count,):
            raise ShapeMismatchError(len(self.layers) - 1, self.layers[-1].kind, (self.class_count,), shape)

    @property
    def model_id(self) -> str:
        return self.provenance.get("model_id") or f"{self.architecture_id}-{self.rng_seed}"

    def copy(self) -> "Model":
        return copy.deepcopy(self)

    def parameterized_indices(self) -> List[int]:
        return [i for i, layer in enumerate(self.layers) if layer.parameterized]

    def conv_indices(self) -> List[int]:
        return [i for i, layer in enumerate(self.layers) if isinstance(layer, Conv2D)]

    def check_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1:] != self.input_shape:
            raise ShapeMismatchError(0, self.layers[0].kind, self.input_shape, X.shape[1:])
        return X

    def forward_batch(self, X: np.ndarray, start: int = 0) -> Tuple[List[np.ndarray], List[Any]]:
        """Run layers ``start..L-1`` on a batch, returning activations and caches."""
        activations, caches = [], []
        out = X
        for layer in self.layers[start:]:
            out, cache = layer.forward(out)
            activations.append(out)
            caches.append(cache)
        return activations, caches

    def backward_batch(self, caches: List[Any], grad_logits: np.ndarray, stop: int = -1,
                       need_params: bool = False) -> Tuple[np.ndarray, List[Optional[Dict[str, np.ndarray]]]]:
        """Backpropagate from the logits down to the output of layer ``stop``.

        ``stop=-1`` yields the gradient with respect to the model input.
        ``caches`` must come from a full ``forward_batch`` call.
        """
        grad = grad_logits
        param_grads: List[Optional[Dict[str, np.ndarray]]] = [None] * len(self.layers)
        for index in range(len(self.layers) - 1, stop, -1):
            grad, param_grads[index] = self.layers[index].backward(grad, caches[index], need_params)
        return grad, param_grads

    def logits(self, X: np.ndarray, batch_size: int = 512) -> np.ndarray:
        X = self.check_batch(X)
        if len(X) == 0:
            return np.zeros((0, self.class_count))
        chunks = [self.forward_batch(X[i:i + batch_size])[0][-1] for i in range(0, len(X), batch_size)]
        return np.concatenate(chunks, axis=0)


def _build_layer(spec: Dict[str, Any], shape: Tuple[int, ...], class_count: int) -> Layer:
    kind = spec["type"]
    if kind == "dense":
        units = spec.get("units") or spec.get("out_features") or class_count
        return Dense(int(np.prod(shape)), units)
    if kind == "conv2d":
        return Conv2D(shape[0], spec.get("filters", spec.get("out_channels", 8)), spec.get("kernel_size", 3), spec.get("padding"))
    if kind == "avgpool2d":
        return AvgPool2D(spec.get("size", 2))
    if kind in ("relu", "softplus", "flatten"):
        return {"relu": ReLU, "softplus": Softplus, "flatten": Flatten}[kind]()
    return layer_from_spec(spec)


def build_model(architecture: Union[str, Sequence[Dict[str, Any]]], input_shape: Sequence[int],
                class_count: int, seed: int, architecture_id: Optional[str] = None) -> Model:
    """Build and initialise a model from a preset name or a list of layer descriptors.

    Weights are uniform in +-sqrt(6 / (fan_in + fan_out)) drawn from a generator
    seeded with ``seed``; biases start at zero.
    """
    if isinstance(architecture, str):
        try:
            specs = ARCHITECTURES[architecture]
        except KeyError:
            raise LayerTypeError(f"Unknown architecture {architecture!r}; known: {sorted(ARCHITECTURES)}") from None
        architecture_id = architecture_id or architecture
    else:
        specs = list(architecture)
        architecture_id = architecture_id or "custom"

    rng = np.random.default_rng(seed)
    layers, shape = [], tuple(input_shape)
    for index, spec in enumerate(specs):
        layer = _build_layer(spec, shape, class_count)
        shape = layer.output_shape(shape, index)
        if layer.parameterized:
            layer.init(rng)
        layers.append(layer)
    return Model(architecture_id, tuple(input_shape), class_count, layers, int(seed))


def _check_class(model: Model, class_index: ClassIndex, n: int) -> np.ndarray:
    idx = np.broadcast_to(np.asarray(class_index, dtype=np.int64), (n,))
    if np.any(idx < 0) or np.any(idx >= model.class_count):
        raise ClassIndexError(f"class_index {class_index!r} outside [0, {model.class_count})")
    return idx


def _one_hot(idx: np.ndarray, c: int) -> np.ndarray:
    seed = np.zeros((len(idx), c))
    seed[np.arange(len(idx)), idx] = 1.0
    return seed


def forward(model: Model, x: np.ndarray) -> ForwardTrace:
    """All intermediate activations and the final logits for one sample."""
    X = model.check_batch(np.asarray(x, dtype=np.float64)[None])
    activations, _ = model.forward_batch(X)
    acts = [a[0] for a in activations]
    return ForwardTrace(activations=acts, logits=acts[-1])


def forward_from(model: Model, activation: np.ndarray, layer_index: int) -> np.ndarray:
    """Logits obtained by restarting the forward pass from the output of ``layer_index``."""
    if layer_index == len(model.layers) - 1:
        return np.asarray(activation, dtype=np.float64).copy()
    activations, _ = model.forward_batch(np.asarray(activation, dtype=np.float64)[None], start=layer_index + 1)
    return activations[-1][0]


def input_gradients(model: Model, X: np.ndarray, class_index: ClassIndex) -> np.ndarray:
    """d logit_class / d x for every row of a batch."""
    X = model.check_batch(X)
    idx = _check_class(model, class_index, len(X))
    _, caches = model.forward_batch(X)
    grad, _ = model.backward_batch(caches, _one_hot(idx, model.class_count))
    return grad


def grad_wrt_input(model: Model, x: np.ndarray, class_index: int) -> np.ndarray:
    return input_gradients(model, np.asarray(x, dtype=np.float64)[None], class_index)[0]


def activation_gradients(model: Model, X: np.ndarray, layer_index: int,
                         class_index: ClassIndex) -> Tuple[np.ndarray, np.ndarray]:
    """Activations of ``layer_index`` and d logit_class / d activation, batched."""
    last = len(model.layers) - 1
    if not 0 <= layer_index <= last:
        raise LayerTypeError(f"layer_index {layer_index} outside [0, {last}]")
    if layer_index != last and not isinstance(model.layers[layer_index], Conv2D):
        raise LayerTypeError(
            f"layer {layer_index} is {model.layers[layer_index].kind}, not a conv layer or the output layer"
        )
    X = model.check_batch(X)
    idx = _check_class(model, class_index, len(X))
    activations, caches = model.forward_batch(X)
    grad, _ = model.backward_batch(caches, _one_hot(idx, model.class_count), stop=layer_index)
    return activations[layer_index], grad


def grad_wrt_activation(model: Model, x: np.ndarray, layer_index: int, class_index: int) -> np.ndarray:
    _, grad = activation_gradients(model, np.asarray(x, dtype=np.float64)[None], layer_index, class_index)
    return grad[0]


def predict(model: Model, X: np.ndarray) -> np.ndarray:
    """Argmax class of every row."""
    return np.argmax(model.logits(X), axis=1)


def accuracy(model: Model, X: np.ndarray, y: np.ndarray) -> float:
    if len(X) == 0:
        return 0.0
    return float(np.mean(predict(model, X) == np.asarray(y)))
