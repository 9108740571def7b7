import logging
import warnings
from typing import List

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

from dataset.types import LabeledDataset
from utils.exceptions import ConfigError

from .exceptions import PartitionError

logger = logging.getLogger(__name__)


def partition(dataset: LabeledDataset, k: int, seed: int, stratify: bool = True) -> List[np.ndarray]:
    """Split sample indices into k disjoint blocks whose sizes differ by at most one.

    Stratified by label unless ``stratify`` is false or no class has k samples,
    in which case a plain shuffled split is used.
    """
    k = int(k)
    n = len(dataset)
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    if k > n:
        raise PartitionError(f"cannot split {n} samples of {dataset.name} into {k} blocks")

    indices = np.arange(n)
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    if stratify:
        if dataset.class_counts().max() >= k:
            splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
        else:
            logger.warning("No class of %s has %d samples; blocks are not stratified", dataset.name, k)

    with warnings.catch_warnings():
        # StratifiedKFold warns when a minority class has fewer than k members.
        warnings.simplefilter("ignore", UserWarning)
        blocks = [np.sort(test) for _, test in splitter.split(indices, dataset.labels)]
    logger.debug("Partitioned %s into block sizes %s", dataset.name, [len(b) for b in blocks])
    return blocks
