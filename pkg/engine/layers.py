"""
Layers of the numpy engine.

Every layer works on batches (leading axis N) of 64-bit floats and implements
``forward`` (returning the output and a cache) and ``backward`` (returning the
gradient with respect to its input and, on request, its parameter gradients).
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .exceptions import LayerTypeError, ShapeMismatchError

Shape = Tuple[int, ...]


def glorot_uniform(rng: np.random.Generator, shape: Shape, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Layer(ABC):
    """Abstract layer: shape inference, forward, backward, descriptor."""

    kind = "layer"
    parameterized = False

    def params(self) -> Dict[str, np.ndarray]:
        return {}

    def set_params(self, values: Dict[str, np.ndarray]) -> None:
        if values:
            raise ValueError(f"{self.kind} has no parameters")

    @abstractmethod
    def output_shape(self, input_shape: Shape, index: int = 0) -> Shape:
        pass

    @abstractmethod
    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, Any]:
        pass

    @abstractmethod
    def backward(self, grad_out: np.ndarray, cache: Any, need_params: bool = False
                 ) -> Tuple[np.ndarray, Optional[Dict[str, np.ndarray]]]:
        pass

    def spec(self) -> Dict[str, Any]:
        return {"type": self.kind}

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()})"


class Dense(Layer):
    kind = "dense"
    parameterized = True

    def __init__(self, in_features: int, out_features: int,
                 weight: Optional[np.ndarray] = None, bias: Optional[np.ndarray] = None):
        self.in_features = int(in_features)
        self.out_features = int(out_features)
        self.weight = np.zeros((self.out_features, self.in_features)) if weight is None else np.asarray(weight, dtype=np.float64)
        self.bias = np.zeros(self.out_features) if bias is None else np.asarray(bias, dtype=np.float64)

    def init(self, rng: np.random.Generator) -> None:
        self.weight = glorot_uniform(rng, (self.out_features, self.in_features), self.in_features, self.out_features)
        self.bias = np.zeros(self.out_features)

    def params(self):
        return {"weight": self.weight, "bias": self.bias}

    def set_params(self, values):
        self.weight = np.asarray(values["weight"], dtype=np.float64).reshape(self.out_features, self.in_features)
        self.bias = np.asarray(values["bias"], dtype=np.float64).reshape(self.out_features)

    def output_shape(self, input_shape, index=0):
        if tuple(input_shape) != (self.in_features,):
            raise ShapeMismatchError(index, self.kind, (self.in_features,), input_shape)
        return (self.out_features,)

    def forward(self, x):
        return x @ self.weight.T + self.bias, x

    def backward(self, grad_out, cache, need_params=False):
        grad_in = grad_out @ self.weight
        if not need_params:
            return grad_in, None
        return grad_in, {"weight": grad_out.T @ cache, "bias": grad_out.sum(axis=0)}

    def spec(self):
        return {"type": self.kind, "in_features": self.in_features, "out_features": self.out_features}


class Conv2D(Layer):
    """Stride-1 convolution over (N, C, H, W) with zero padding."""

    kind = "conv2d"
    parameterized = True

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int = 3, padding: Optional[int] = None,
                 weight: Optional[np.ndarray] = None, bias: Optional[np.ndarray] = None):
        self.in_channels = int(in_channels)
        self.out_channels = int(out_channels)
        self.kernel_size = int(kernel_size)
        # "same" padding for odd kernels unless told otherwise
        self.padding = self.kernel_size // 2 if padding is None else int(padding)
        wshape = (self.out_channels, self.in_channels, self.kernel_size, self.kernel_size)
        self.weight = np.zeros(wshape) if weight is None else np.asarray(weight, dtype=np.float64)
        self.bias = np.zeros(self.out_channels) if bias is None else np.asarray(bias, dtype=np.float64)

    def init(self, rng):
        area = self.kernel_size * self.kernel_size
        self.weight = glorot_uniform(rng, self.weight.shape, self.in_channels * area, self.out_channels * area)
        self.bias = np.zeros(self.out_channels)

    def params(self):
        return {"weight": self.weight, "bias": self.bias}

    def set_params(self, values):
        self.weight = np.asarray(values["weight"], dtype=np.float64).reshape(
            self.out_channels, self.in_channels, self.kernel_size, self.kernel_size)
        self.bias = np.asarray(values["bias"], dtype=np.float64).reshape(self.out_channels)

    def output_shape(self, input_shape, index=0):
        if len(input_shape) != 3 or input_shape[0] != self.in_channels:
            raise ShapeMismatchError(index, self.kind, (self.in_channels, "H", "W"), input_shape)
        _, h, w = input_shape
        oh = h + 2 * self.padding - self.kernel_size + 1
        ow = w + 2 * self.padding - self.kernel_size + 1
        if oh < 1 or ow < 1:
            raise ShapeMismatchError(index, self.kind, (self.in_channels, self.kernel_size, self.kernel_size), input_shape)
        return (self.out_channels, oh, ow)

    def _pad(self, x):
        p = self.padding
        if p == 0:
            return x
        return np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))

    def forward(self, x):
        # windows: (N, C, OH, OW, k, k)
        windows = sliding_window_view(self._pad(x), (self.kernel_size, self.kernel_size), axis=(2, 3))
        out = np.tensordot(windows, self.weight, axes=([1, 4, 5], [1, 2, 3]))  # (N, OH, OW, O)
        out = out.transpose(0, 3, 1, 2) + self.bias[None, :, None, None]
        return out, (x.shape, windows)

    def backward(self, grad_out, cache, need_params=False):
        in_shape, windows = cache
        k, p = self.kernel_size, self.padding
        # full correlation of the output gradient with the flipped kernel
        gpad = np.pad(grad_out, ((0, 0), (0, 0), (k - 1, k - 1), (k - 1, k - 1)))
        gwin = sliding_window_view(gpad, (k, k), axis=(2, 3))  # (N, O, Hp, Wp, k, k)
        flipped = self.weight[:, :, ::-1, ::-1]
        grad_padded = np.tensordot(gwin, flipped, axes=([1, 4, 5], [0, 2, 3])).transpose(0, 3, 1, 2)
        h, w = in_shape[2], in_shape[3]
        grad_in = np.ascontiguousarray(grad_padded[:, :, p:p + h, p:p + w])
        if not need_params:
            return grad_in, None
        grad_w = np.tensordot(grad_out, windows, axes=([0, 2, 3], [0, 2, 3]))  # (O, C, k, k)
        return grad_in, {"weight": grad_w, "bias": grad_out.sum(axis=(0, 2, 3))}

    def spec(self):
        return {"type": self.kind, "in_channels": self.in_channels, "out_channels": self.out_channels,
                "kernel_size": self.kernel_size, "padding": self.padding}


class ReLU(Layer):
    kind = "relu"

    def output_shape(self, input_shape, index=0):
        return tuple(input_shape)

    def forward(self, x):
        mask = x > 0
        return np.where(mask, x, 0.0), mask

    def backward(self, grad_out, cache, need_params=False):
        # subgradient at exactly 0 is 0
        return grad_out * cache, None


class Softplus(Layer):
    kind = "softplus"

    def output_shape(self, input_shape, index=0):
        return tuple(input_shape)

    def forward(self, x):
        return np.logaddexp(0.0, x), x

    def backward(self, grad_out, cache, need_params=False):
        return grad_out * (0.5 * (1.0 + np.tanh(0.5 * cache))), None


class AvgPool2D(Layer):
    """Non-overlapping average pooling; ``size`` equal to H gives a global average."""

    kind = "avgpool2d"

    def __init__(self, size: int = 2):
        self.size = int(size)

    def output_shape(self, input_shape, index=0):
        s = self.size
        if len(input_shape) != 3 or input_shape[1] % s or input_shape[2] % s:
            raise ShapeMismatchError(index, self.kind, ("C", f"H divisible by {s}", f"W divisible by {s}"), input_shape)
        c, h, w = input_shape
        return (c, h // s, w // s)

    def forward(self, x):
        n, c, h, w = x.shape
        s = self.size
        return x.reshape(n, c, h // s, s, w // s, s).mean(axis=(3, 5)), x.shape

    def backward(self, grad_out, cache, need_params=False):
        s = self.size
        grad_in = np.repeat(np.repeat(grad_out, s, axis=2), s, axis=3) / (s * s)
        return grad_in.reshape(cache), None

    def spec(self):
        return {"type": self.kind, "size": self.size}


class Flatten(Layer):
    kind = "flatten"

    def output_shape(self, input_shape, index=0):
        return (int(np.prod(input_shape)),)

    def forward(self, x):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, grad_out, cache, need_params=False):
        return grad_out.reshape(cache), None


LAYER_TYPES = {cls.kind: cls for cls in (Dense, Conv2D, ReLU, Softplus, AvgPool2D, Flatten)}


def layer_from_spec(spec: Dict[str, Any]) -> Layer:
    """Rebuild an (uninitialised) layer from its descriptor."""
    spec = dict(spec)
    kind = spec.pop("type")
    try:
        cls = LAYER_TYPES[kind]
    except KeyError:
        raise LayerTypeError(f"Unknown layer type: {kind!r}") from None
    return cls(**spec)
