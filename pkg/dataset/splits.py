import logging
from typing import Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from utils.exceptions import ConfigError

from .types import LabeledDataset

logger = logging.getLogger(__name__)

DEFAULT_TEST_FRACTION = 0.2


def split_train_test(dataset: LabeledDataset, test_fraction: float = DEFAULT_TEST_FRACTION, seed: int = 0,
                     stratify: bool = True) -> Tuple[LabeledDataset, LabeledDataset]:
    """Seeded train/test split, stratified by label when every class has two samples or more."""
    if not 0 < test_fraction < 1:
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n = len(dataset)
    if n < 2:
        raise ConfigError(f"need at least 2 samples to split, got {n}")

    strata = dataset.labels if stratify else None
    if strata is not None and dataset.class_counts()[np.unique(dataset.labels)].min() < 2:
        logger.warning("Some class of %s has fewer than 2 samples; splitting without stratification", dataset.name)
        strata = None
    try:
        train_idx, test_idx = train_test_split(np.arange(n), test_size=test_fraction, random_state=seed,
                                               stratify=strata)
    except ValueError as exc:
        if strata is None:
            raise ConfigError(f"cannot split {dataset.name}: {exc}") from exc
        logger.warning("Stratified split of %s failed (%s); splitting without stratification", dataset.name, exc)
        train_idx, test_idx = train_test_split(np.arange(n), test_size=test_fraction, random_state=seed)
    return (dataset.subset(np.sort(train_idx), name=f"{dataset.name}-train"),
            dataset.subset(np.sort(test_idx), name=f"{dataset.name}-test"))
