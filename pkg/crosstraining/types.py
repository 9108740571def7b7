from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from engine.network import Model

from .exceptions import EmptyEnsembleError, PartitionError

PairProvenance = Tuple[str, int, int]


def fold_assignment(blocks: List[np.ndarray], n: Optional[int] = None) -> np.ndarray:
    """Index of the block holding each sample; validates that blocks partition ``range(n)``."""
    total = sum(len(b) for b in blocks)
    n = total if n is None else n
    if total != n:
        raise PartitionError(f"blocks cover {total} indices but the dataset has {n} samples")
    fold_of = np.full(n, -1, dtype=np.int64)
    for i, block in enumerate(blocks):
        block = np.asarray(block, dtype=np.int64)
        if block.size and (block.min() < 0 or block.max() >= n):
            raise PartitionError(f"block {i} holds indices outside [0, {n})")
        if np.any(fold_of[block] != -1):
            raise PartitionError(f"block {i} overlaps an earlier block")
        fold_of[block] = i
    if np.any(fold_of == -1):
        raise PartitionError("blocks do not cover every sample")
    return fold_of


@dataclass
class FoldEnsemble:
    """k models, model i trained on every block except block i."""

    blocks: List[np.ndarray]
    models: List[Model]
    accuracies: List[float]
    seeds: Dict[str, Any] = field(default_factory=dict)
    accuracy_tolerance: float = 0.03
    accuracy_source: str = "test"
    architecture: Any = None
    train_config: Dict[str, Any] = field(default_factory=dict)
    degradation: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if not self.models:
            raise EmptyEnsembleError("an ensemble needs at least one model")
        self.blocks = [np.sort(np.asarray(b, dtype=np.int64)) for b in self.blocks]
        if len(self.blocks) < 2:
            raise PartitionError(f"k must be >= 2, got {len(self.blocks)}")
        if len(self.models) != len(self.blocks) or len(self.accuracies) != len(self.blocks):
            raise PartitionError(
                f"{len(self.blocks)} blocks, {len(self.models)} models and {len(self.accuracies)} accuracies"
            )
        self.accuracies = [float(a) for a in self.accuracies]
        fold_assignment(self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def size(self) -> int:
        return int(sum(len(b) for b in self.blocks))

    @property
    def spread(self) -> float:
        return max(self.accuracies) - min(self.accuracies)

    def model_ids(self) -> List[str]:
        return [m.model_id for m in self.models]


@dataclass
class ExplanationBank:
    """Explanations and predictions of every fold model on every sample.

    ``maps`` is (k, N, H, W), ``predictions`` is (k, N).
    """

    method: str
    maps: np.ndarray
    predictions: np.ndarray
    sample_ids: List[str]
    model_ids: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.maps = np.asarray(self.maps, dtype=np.float64)
        self.predictions = np.asarray(self.predictions, dtype=np.int64)
        if self.maps.ndim != 4 or self.predictions.shape != self.maps.shape[:2]:
            raise PartitionError(
                f"bank needs maps (k, N, H, W) and predictions (k, N), got {self.maps.shape} and "
                f"{self.predictions.shape}"
            )
        if len(self.sample_ids) != self.maps.shape[1]:
            raise PartitionError(f"{len(self.sample_ids)} sample ids for {self.maps.shape[1]} explained samples")
        if not self.model_ids:
            self.model_ids = [f"fold-{i}" for i in range(self.maps.shape[0])]

    @property
    def k(self) -> int:
        return self.maps.shape[0]


@dataclass
class SeparationSets:
    """Distance multisets S= (both models right) and S!= (exactly one right).

    Provenance entries are (sample_id, i, j): model i trained on the sample,
    model j held it out.
    """

    s_equal: np.ndarray
    s_diff: np.ndarray
    provenance_equal: List[PairProvenance] = field(default_factory=list)
    provenance_diff: List[PairProvenance] = field(default_factory=list)
    skipped_pairs: int = 0
    degenerate_pairs: int = 0
    method: str = ""
    distance_kind: str = ""

    @property
    def total_pairs(self) -> int:
        return len(self.s_equal) + len(self.s_diff) + self.skipped_pairs + self.degenerate_pairs

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "distance_kind": self.distance_kind,
            "s_equal_count": len(self.s_equal),
            "s_diff_count": len(self.s_diff),
            "skipped_pairs": self.skipped_pairs,
            "degenerate_pairs": self.degenerate_pairs,
        }
