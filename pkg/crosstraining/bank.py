import logging
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from attribution.services import explain_batch, get_method
from attribution.types import AttributionConfig
from dataset.types import LabeledDataset
from engine.network import Model

from .types import ExplanationBank, FoldEnsemble

logger = logging.getLogger(__name__)


def _explain_model(method, model: Model, dataset: LabeledDataset, cfg: AttributionConfig):
    maps = explain_batch(method, model, dataset.images, dataset.sample_ids, cfg)
    values = np.stack([m.values for m in maps]) if maps else np.zeros((0,) + dataset.spatial_shape)
    predictions = np.array([m.predicted_class for m in maps], dtype=np.int64)
    return values, predictions


def compute_explanations(ensemble: FoldEnsemble, dataset: LabeledDataset, method,
                         cfg: Optional[AttributionConfig] = None, n_jobs: int = 1) -> ExplanationBank:
    """Explain every sample under every fold model, one joblib task per model."""
    strategy = get_method(method)
    cfg = cfg or AttributionConfig()
    logger.info("Explaining %d samples with %s under %d models", len(dataset), strategy.name, ensemble.k)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_explain_model)(strategy.name, model, dataset, cfg) for model in ensemble.models
    )
    return ExplanationBank(
        method=strategy.name,
        maps=np.stack([values for values, _ in results]),
        predictions=np.stack([predictions for _, predictions in results]),
        sample_ids=list(dataset.sample_ids),
        model_ids=ensemble.model_ids(),
    )
