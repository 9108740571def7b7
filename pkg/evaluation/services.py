import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from attribution.services import explain
from attribution.types import AttributionConfig
from dataset.types import LabeledDataset
from distances.exceptions import DegenerateInputError
from engine.network import Model

from .fidelity import fidelity_mu
from .stability import stability_details
from .types import FidelityConfig, StabilityConfig

logger = logging.getLogger(__name__)

DEFAULT_METRIC_SAMPLES = 50


@dataclass
class SampleAverage:
    mean: Optional[float]
    used: int
    skipped: int

    def to_dict(self):
        return asdict(self)


def _average(values, skipped, label) -> SampleAverage:
    if skipped:
        logger.warning("%s skipped %d degenerate samples", label, skipped)
    mean = float(np.mean(values)) if values else None
    return SampleAverage(mean=mean, used=len(values), skipped=skipped)


def average_fidelity(model: Model, dataset: LabeledDataset, method, cfg: Optional[FidelityConfig] = None,
                     attribution_cfg: Optional[AttributionConfig] = None,
                     limit: int = DEFAULT_METRIC_SAMPLES) -> SampleAverage:
    """Mean muF over the first ``limit`` samples; degenerate samples are skipped and counted."""
    values, skipped = [], 0
    for x, sample_id in zip(dataset.images[:limit], dataset.sample_ids[:limit]):
        phi = explain(method, model, x, cfg=attribution_cfg, sample_id=sample_id)
        try:
            values.append(fidelity_mu(model, x, phi, cfg))
        except DegenerateInputError:
            skipped += 1
    return _average(values, skipped, "muF")


def average_stability(model: Model, dataset: LabeledDataset, method, cfg: Optional[StabilityConfig] = None,
                      attribution_cfg: Optional[AttributionConfig] = None,
                      limit: int = DEFAULT_METRIC_SAMPLES) -> SampleAverage:
    """Mean S_avg over the first ``limit`` samples; degenerate samples are skipped and counted."""
    values, skipped = [], 0
    for x, sample_id in zip(dataset.images[:limit], dataset.sample_ids[:limit]):
        try:
            mean, _ = stability_details(model, x, method, cfg, attribution_cfg, sample_id=sample_id)
            values.append(mean)
        except DegenerateInputError:
            skipped += 1
    return _average(values, skipped, "S_avg")
