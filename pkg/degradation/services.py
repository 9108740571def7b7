import logging
from dataclasses import replace
from typing import List, Optional

from crosstraining.types import FoldEnsemble
from dataset.types import LabeledDataset
from engine.network import accuracy

from .protocols import invert_labels, limit_data, randomize_weights
from .types import DECLARED_LEVELS, DegradationKind, DegradationSpec

logger = logging.getLogger(__name__)


def default_grid(seed: int = 0, noise_sigma: float = 0.5) -> List[DegradationSpec]:
    """Every declared level of every protocol."""
    return [DegradationSpec(kind, level, noise_sigma=noise_sigma, seed=seed)
            for kind in DegradationKind for level in DECLARED_LEVELS[kind]]


def retrains(spec: Optional[DegradationSpec]) -> bool:
    """Label and data degradations need a fresh ensemble; weight noise perturbs the trained one."""
    return spec is not None and spec.kind is not DegradationKind.RANDOMIZE_WEIGHTS


def degrade_dataset(dataset: LabeledDataset, spec: DegradationSpec) -> LabeledDataset:
    if spec.kind is DegradationKind.INVERT_LABELS:
        return invert_labels(dataset, spec)
    if spec.kind is DegradationKind.LIMIT_DATA:
        return limit_data(dataset, spec)
    return dataset


def degrade_ensemble(ensemble: FoldEnsemble, spec: DegradationSpec,
                     eval_data: Optional[LabeledDataset] = None) -> FoldEnsemble:
    """Fold models with their weights randomized; fold i uses seed ``spec.seed + i``.

    Accuracies are re-measured on ``eval_data`` when given.
    """
    models = [randomize_weights(m, replace(spec, seed=spec.seed + i)) for i, m in enumerate(ensemble.models)]
    accuracies = ensemble.accuracies
    if eval_data is not None:
        accuracies = [accuracy(m, eval_data.images, eval_data.labels) for m in models]
    logger.info("Randomized weights of %d fold models (%s)", len(models), spec.label)
    return replace(ensemble, models=models, accuracies=accuracies, degradation=spec.to_dict())
