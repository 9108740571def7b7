"""
Concrete attribution methods.

Channel reduction: SM and SG keep the max |value| over channels, GI and IG
sum the signed channels and then take the absolute value.
"""

import zlib

import numpy as np
from scipy.integrate import trapezoid
from skimage.transform import resize

from engine.network import activation_gradients, input_gradients

from .exceptions import NoConvLayerError
from .interfaces import AttributionMethod


def max_abs_channels(attr: np.ndarray) -> np.ndarray:
    return np.max(np.abs(attr), axis=-3)


def abs_sum_channels(attr: np.ndarray) -> np.ndarray:
    return np.abs(np.sum(attr, axis=-3))


def sample_rng(seed: int, sample_id: str) -> np.random.Generator:
    # keyed by sample id so a map does not depend on the order samples are explained in
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(sample_id.encode("utf-8"))])


class SaliencyMethod(AttributionMethod):
    name = "SM"

    def attribute(self, model, x, class_index, cfg, sample_id=""):
        grad = input_gradients(model, x[None], class_index)[0]
        return max_abs_channels(grad), grad

    def attribute_batch(self, model, X, class_indices, cfg, sample_ids):
        grads = input_gradients(model, X, np.asarray(class_indices))
        return list(zip(max_abs_channels(grads), grads))


class GradientInputMethod(AttributionMethod):
    name = "GI"

    def attribute(self, model, x, class_index, cfg, sample_id=""):
        raw = input_gradients(model, x[None], class_index)[0] * x
        return abs_sum_channels(raw), raw

    def attribute_batch(self, model, X, class_indices, cfg, sample_ids):
        raw = input_gradients(model, X, np.asarray(class_indices)) * X
        return list(zip(abs_sum_channels(raw), raw))


class IntegratedGradientsMethod(AttributionMethod):
    """Straight-line path from the baseline, trapezoidal rule over ``ig_steps`` points."""

    name = "IG"

    def attribute(self, model, x, class_index, cfg, sample_id=""):
        baseline = np.broadcast_to(np.asarray(cfg.ig_baseline, dtype=np.float64), x.shape)
        alphas = np.linspace(0.0, 1.0, int(cfg.ig_steps))
        path = baseline[None] + alphas[:, None, None, None] * (x - baseline)[None]
        grads = input_gradients(model, path, class_index)
        raw = (x - baseline) * trapezoid(grads, alphas, axis=0)
        return abs_sum_channels(raw), raw


class SmoothGradMethod(AttributionMethod):
    name = "SG"

    def attribute(self, model, x, class_index, cfg, sample_id=""):
        rng = sample_rng(cfg.rng_seed, sample_id)
        noisy = x[None] + rng.normal(0.0, cfg.sg_sigma, size=(int(cfg.sg_samples),) + x.shape)
        grads = input_gradients(model, noisy, class_index)
        raw = np.mean(np.abs(grads) if cfg.sg_abs else grads, axis=0)
        return max_abs_channels(raw), raw


class GradCamMethod(AttributionMethod):
    """Gradient-weighted maps of the last conv layer, bilinearly upsampled to the input."""

    name = "GC"

    def attribute(self, model, x, class_index, cfg, sample_id=""):
        convs = model.conv_indices()
        if not convs:
            raise NoConvLayerError(f"model {model.model_id} has no conv layer; Grad-CAM is undefined")
        acts, grads = activation_gradients(model, x[None], convs[-1], class_index)
        maps, grad = acts[0], grads[0]
        weights = grad.mean(axis=(1, 2))
        cam = np.maximum(np.tensordot(weights, maps, axes=1), 0.0)
        target = x.shape[-2:]
        if cam.shape == target:
            values = cam.copy()
        else:
            values = resize(cam, target, order=1, mode="edge", anti_aliasing=False, preserve_range=True)
            values = np.maximum(values, 0.0)
        return values, cam
