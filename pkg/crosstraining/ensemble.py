"""
Leave-one-block-out training of the k fold models.

Model i is initialised and shuffled with seeds spawned from the run seed, so a
rerun with the same seed reproduces every fold bit for bit regardless of the
number of joblib workers.
"""

import logging
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from dataset.types import LabeledDataset
from engine.network import Model, accuracy, build_model
from engine.training import TrainConfig, train

from .exceptions import AccuracySpreadError
from .partition import partition
from .types import FoldEnsemble

logger = logging.getLogger(__name__)

DEFAULT_ACCURACY_TOLERANCE = 0.03
ArchitectureSpec = Union[str, Sequence[Dict[str, Any]]]


def fold_seeds(seed: int, k: int) -> List[Tuple[int, int]]:
    """(init_seed, shuffle_seed) per fold."""
    children = np.random.SeedSequence(seed).spawn(k)
    return [tuple(int(v) for v in child.generate_state(2)) for child in children]


def _fit_fold(i: int, architecture: ArchitectureSpec, train_data: LabeledDataset, eval_data: LabeledDataset,
              class_count: int, cfg: TrainConfig, init_seed: int, shuffle_seed: int) -> Tuple[Model, float]:
    model = build_model(architecture, train_data.input_shape, class_count, seed=init_seed)
    model.provenance["model_id"] = f"fold-{i}"
    trained = train(model, train_data, replace(cfg, seed=shuffle_seed))
    acc = accuracy(trained, eval_data.images, eval_data.labels)
    trained.provenance["fold"] = i
    trained.provenance["eval_accuracy"] = acc
    return trained, acc


def check_spread(accuracies: Sequence[float], tolerance: float, strict: bool) -> float:
    spread = max(accuracies) - min(accuracies)
    if spread > tolerance:
        if strict:
            raise AccuracySpreadError(accuracies, tolerance)
        logger.warning("Fold accuracy spread %.4f exceeds tolerance %.4f: %s", spread, tolerance,
                       [round(a, 4) for a in accuracies])
    return spread


def train_ensemble(dataset: LabeledDataset, k: int, architecture: ArchitectureSpec, cfg: TrainConfig,
                   test_data: Optional[LabeledDataset] = None, seed: int = 0,
                   accuracy_tolerance: float = DEFAULT_ACCURACY_TOLERANCE, strict: bool = False,
                   enforce_spread: bool = True, stratify: bool = True, n_jobs: int = 1) -> FoldEnsemble:
    """Train k fold models on the k leave-one-block-out coalitions of ``dataset``.

    Accuracies are measured on ``test_data`` when given, otherwise on each
    model's held-out block. With ``enforce_spread`` the max-min accuracy spread
    is checked against ``accuracy_tolerance``: an error in strict mode, a
    warning otherwise.
    """
    blocks = partition(dataset, k, seed, stratify=stratify)
    seeds = fold_seeds(seed, len(blocks))

    jobs = []
    for i, (init_seed, shuffle_seed) in enumerate(seeds):
        train_idx = np.sort(np.concatenate([b for j, b in enumerate(blocks) if j != i]))
        train_data = dataset.subset(train_idx, name=f"{dataset.name}-fold{i}")
        eval_data = test_data if test_data is not None else dataset.subset(blocks[i])
        jobs.append(delayed(_fit_fold)(i, architecture, train_data, eval_data, dataset.class_count, cfg,
                                       init_seed, shuffle_seed))

    logger.info("Training %d fold models on %s (%d samples, n_jobs=%d)", len(blocks), dataset.name,
                len(dataset), n_jobs)
    results = Parallel(n_jobs=n_jobs)(jobs)
    models = [m for m, _ in results]
    accuracies = [a for _, a in results]

    if enforce_spread:
        check_spread(accuracies, accuracy_tolerance, strict)

    ensemble = FoldEnsemble(
        blocks=blocks,
        models=models,
        accuracies=accuracies,
        seeds={"partition": int(seed), "init": [s for s, _ in seeds], "shuffle": [s for _, s in seeds]},
        accuracy_tolerance=accuracy_tolerance,
        accuracy_source="test" if test_data is not None else "held_out_block",
        architecture=architecture,
        train_config=cfg.to_dict(),
    )
    logger.info("Fold accuracies %s (spread %.4f)", [round(a, 4) for a in accuracies], ensemble.spread)
    return ensemble
