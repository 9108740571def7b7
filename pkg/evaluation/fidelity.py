import logging
import math
from typing import Optional

import numpy as np
from scipy.stats import pearsonr

from attribution.types import ExplanationMap
from distances.exceptions import DegenerateInputError
from distances.strategies import spearman_rho
from engine.network import Model, predict

from .exceptions import MetricConfigError
from .types import FidelityConfig

logger = logging.getLogger(__name__)


# raw attribution of these methods is input x gradient, in score units
SIGNED_METHODS = ("GI", "IG")


def attribution_map(explanation, spatial_shape) -> np.ndarray:
    """Per-pixel attribution summed over each subset.

    GI and IG use their signed raw attribution summed over channels; other
    methods and bare arrays use the reduced map.
    """
    if not isinstance(explanation, ExplanationMap):
        return np.asarray(explanation, dtype=np.float64)
    raw = explanation.raw
    if (explanation.method in SIGNED_METHODS and raw is not None and np.ndim(raw) == 3
            and tuple(np.shape(raw)[1:]) == tuple(spatial_shape)):
        return np.asarray(raw, dtype=np.float64).sum(axis=0)
    return explanation.values


def subset_size(cfg: FidelityConfig, pixels: int) -> int:
    return max(1, min(pixels, math.ceil(cfg.subset_fraction * pixels - 1e-9)))


def fidelity_mu(model: Model, x: np.ndarray, explanation: ExplanationMap,
                cfg: Optional[FidelityConfig] = None, class_index: Optional[int] = None) -> float:
    """Correlation between the attribution mass of random pixel subsets and the
    class-score drop when those pixels (all channels) are set to the baseline.

    The class defaults to the explanation's class, then to the prediction.
    """
    cfg = cfg or FidelityConfig()
    x = model.check_batch(np.asarray(x, dtype=np.float64)[None])[0]
    phi = attribution_map(explanation, x.shape[1:])
    sample_id = explanation.sample_id if isinstance(explanation, ExplanationMap) else ""
    if phi.shape != x.shape[1:]:
        raise MetricConfigError(f"explanation shape {phi.shape} does not match input spatial shape {x.shape[1:]}")
    if class_index is None:
        class_index = explanation.class_index if isinstance(explanation, ExplanationMap) else -1
    if class_index < 0:
        class_index = int(predict(model, x[None])[0])

    pixels = phi.size
    size = subset_size(cfg, pixels)
    rng = np.random.default_rng(cfg.seed)
    masks = np.zeros((cfg.num_subsets, pixels), dtype=bool)
    for s in range(cfg.num_subsets):
        masks[s, rng.choice(pixels, size=size, replace=False)] = True
    masks = masks.reshape((cfg.num_subsets,) + phi.shape)

    attributed = np.array([phi[m].sum() for m in masks])
    perturbed = np.where(masks[:, None, :, :], cfg.baseline, x[None])
    logits = model.logits(np.concatenate([x[None], perturbed]))[:, class_index]
    drops = logits[0] - logits[1:]

    if np.ptp(attributed) == 0 or np.ptp(drops) == 0:
        raise DegenerateInputError("attribution sums or score drops have zero variance", sample_id)
    if cfg.correlation == "spearman":
        return spearman_rho(attributed, drops, sample_id)
    return float(pearsonr(attributed, drops).statistic)
