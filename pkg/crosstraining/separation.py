"""
Pairing step of cross-training.

For a sample held out by model j and seen by every other model i, the
distance between the two explanations goes to S= when both models predict
the label, to S!= when exactly one does, and is skipped when neither does.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np

from attribution.types import AttributionConfig
from dataset.types import LabeledDataset
from distances.exceptions import DegenerateInputError
from distances.services import DistanceFn, distance
from distances.types import DistanceKind

from .bank import compute_explanations
from .exceptions import EmptyEnsembleError, PartitionError
from .types import ExplanationBank, FoldEnsemble, PairProvenance, SeparationSets, fold_assignment

logger = logging.getLogger(__name__)


def _pair_distance(kind, a: np.ndarray, b: np.ndarray, sample_id: str) -> float:
    if callable(kind) and not isinstance(kind, DistanceKind):
        return float(kind(a, b))
    return distance(kind, a, b, sample_id)


def separate(blocks: Sequence[np.ndarray], labels: np.ndarray, bank: ExplanationBank,
             kind: Union[str, DistanceKind, DistanceFn]) -> SeparationSets:
    """Build S= and S!= from precomputed explanations and predictions."""
    labels = np.asarray(labels, dtype=np.int64)
    if bank.k != len(blocks):
        raise PartitionError(f"bank holds {bank.k} models but there are {len(blocks)} blocks")
    fold_of = fold_assignment(list(blocks), len(labels))
    if bank.maps.shape[1] != len(labels):
        raise PartitionError(f"bank explains {bank.maps.shape[1]} samples but there are {len(labels)} labels")
    kind_name = kind.__name__ if callable(kind) and not isinstance(kind, DistanceKind) else str(
        DistanceKind.parse(kind))

    correct = bank.predictions == labels[None, :]
    s_equal: List[float] = []
    s_diff: List[float] = []
    prov_equal: List[PairProvenance] = []
    prov_diff: List[PairProvenance] = []
    skipped = degenerate = 0

    for n, sample_id in enumerate(bank.sample_ids):
        j = int(fold_of[n])
        for i in range(bank.k):
            if i == j:
                continue
            hits = int(correct[i, n]) + int(correct[j, n])
            if hits == 0:
                skipped += 1
                continue
            try:
                d = _pair_distance(kind, bank.maps[i, n], bank.maps[j, n], sample_id)
            except DegenerateInputError as exc:
                logger.debug("Degenerate pair (%s, %d, %d): %s", sample_id, i, j, exc)
                degenerate += 1
                continue
            if hits == 2:
                s_equal.append(d)
                prov_equal.append((sample_id, i, j))
            else:
                s_diff.append(d)
                prov_diff.append((sample_id, i, j))

    sets = SeparationSets(
        s_equal=np.asarray(s_equal, dtype=np.float64),
        s_diff=np.asarray(s_diff, dtype=np.float64),
        provenance_equal=prov_equal,
        provenance_diff=prov_diff,
        skipped_pairs=skipped,
        degenerate_pairs=degenerate,
        method=bank.method,
        distance_kind=kind_name,
    )
    logger.info("Separation sets for %s/%s: |S=|=%d |S!=|=%d skipped=%d degenerate=%d", sets.method, kind_name,
                len(sets.s_equal), len(sets.s_diff), skipped, degenerate)
    return sets


def build_separation_sets(ensemble: FoldEnsemble, dataset: LabeledDataset, method,
                          kind: Union[str, DistanceKind, DistanceFn] = "spearman_abs",
                          cfg: Optional[AttributionConfig] = None, bank: Optional[ExplanationBank] = None,
                          n_jobs: int = 1) -> SeparationSets:
    """S= and S!= for ``ensemble`` over ``dataset``, reusing ``bank`` when given."""
    if ensemble is None or not ensemble.models:
        raise EmptyEnsembleError("cannot build separation sets without fold models")
    if ensemble.size != len(dataset):
        raise PartitionError(f"ensemble blocks cover {ensemble.size} samples but {dataset.name} has {len(dataset)}")
    if bank is None:
        bank = compute_explanations(ensemble, dataset, method, cfg, n_jobs=n_jobs)
    return separate(ensemble.blocks, dataset.labels, bank, kind)
