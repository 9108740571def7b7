import logging
from typing import Optional, Tuple

import numpy as np

from attribution.services import get_method
from attribution.types import AttributionConfig
from distances.exceptions import DegenerateInputError
from distances.services import distance
from engine.network import Model, predict

from .types import StabilityConfig

logger = logging.getLogger(__name__)


def sample_l1_ball(rng: np.random.Generator, centre: np.ndarray, radius: float, count: int) -> np.ndarray:
    """``count`` points uniform in the l1 ball of ``radius`` around ``centre``.

    Direction: a flat Dirichlet point on the simplex with random signs; the
    radius is scaled by u ** (1 / d) so that volume is covered uniformly.
    """
    d = centre.size
    weights = rng.dirichlet(np.ones(d), size=count)
    signs = rng.choice([-1.0, 1.0], size=(count, d))
    scale = radius * rng.uniform(size=(count, 1)) ** (1.0 / d)
    return centre[None] + (scale * signs * weights).reshape((count,) + centre.shape)


def stability_details(model: Model, x: np.ndarray, method, cfg: Optional[StabilityConfig] = None,
                      attribution_cfg: Optional[AttributionConfig] = None, class_index: Optional[int] = None,
                      sample_id: str = "") -> Tuple[float, int]:
    """Mean neighbour distance and the number of degenerate neighbours skipped."""
    cfg = cfg or StabilityConfig()
    attribution_cfg = attribution_cfg or AttributionConfig()
    strategy = get_method(method)
    x = model.check_batch(np.asarray(x, dtype=np.float64)[None])[0]
    if class_index is None:
        class_index = int(predict(model, x[None])[0])

    rng = np.random.default_rng(cfg.seed)
    Z = sample_l1_ball(rng, x, cfg.radius, cfg.num_neighbors)
    X = np.concatenate([x[None], Z])
    # neighbours share the sample id so seeded methods draw the same noise
    results = strategy.attribute_batch(model, X, [class_index] * len(X), attribution_cfg, [sample_id] * len(X))
    reference = results[0][0]

    distances, skipped = [], 0
    for values, _ in results[1:]:
        try:
            distances.append(distance(cfg.inner_distance, reference, values, sample_id))
        except DegenerateInputError:
            skipped += 1
    if not distances:
        raise DegenerateInputError(f"all {cfg.num_neighbors} neighbour explanations are degenerate", sample_id)
    if skipped:
        logger.debug("S_avg for %s skipped %d degenerate neighbours", sample_id or "sample", skipped)
    return float(np.mean(distances)), skipped


def stability_savg(model: Model, x: np.ndarray, method, cfg: Optional[StabilityConfig] = None,
                   attribution_cfg: Optional[AttributionConfig] = None, class_index: Optional[int] = None,
                   sample_id: str = "") -> float:
    """Monte-Carlo average explanation distance over an l1 neighbourhood of ``x``."""
    return stability_details(model, x, method, cfg, attribution_cfg, class_index, sample_id)[0]
