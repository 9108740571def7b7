import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DataFormatError

logger = logging.getLogger(__name__)


@dataclass
class LabeledDataset:
    """Images (N, C, H, W) in [0, 1], integer labels and stable sample ids.

    ``corruption_mask`` and ``original_labels`` are only set on datasets whose
    labels were deliberately corrupted.
    """

    images: np.ndarray
    labels: np.ndarray
    class_count: int
    sample_ids: Optional[List[str]] = None
    name: str = "dataset"
    corruption_mask: Optional[np.ndarray] = None
    original_labels: Optional[np.ndarray] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        self.class_count = int(self.class_count)
        if self.images.ndim != 4:
            raise DataFormatError(f"{self.name}: images must be N x C x H x W, got shape {self.images.shape}")
        n = len(self.images)
        if len(self.labels) != n:
            raise DataFormatError(f"{self.name}: {n} images but {len(self.labels)} labels")
        if self.class_count < 2:
            raise DataFormatError(f"{self.name}: class_count must be >= 2, got {self.class_count}")
        if n and (self.labels.min() < 0 or self.labels.max() >= self.class_count):
            raise DataFormatError(f"{self.name}: labels must lie in [0, {self.class_count})")
        if n and (not np.all(np.isfinite(self.images)) or self.images.min() < 0 or self.images.max() > 1):
            raise DataFormatError(f"{self.name}: pixel values must lie in [0, 1]")
        if self.sample_ids is None:
            self.sample_ids = [f"{self.name}-{i:06d}" for i in range(n)]
        self.sample_ids = [str(s) for s in self.sample_ids]
        if len(self.sample_ids) != n:
            raise DataFormatError(f"{self.name}: {len(self.sample_ids)} sample ids for {n} images")
        if self.corruption_mask is not None:
            self.corruption_mask = np.asarray(self.corruption_mask, dtype=bool).reshape(-1)
            self.original_labels = np.asarray(self.original_labels, dtype=np.int64).reshape(-1)

    def __len__(self):
        return len(self.labels)

    @property
    def input_shape(self) -> Tuple[int, int, int]:
        return tuple(self.images.shape[1:])

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return tuple(self.images.shape[2:])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, indices: Sequence[int], name: Optional[str] = None) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return replace(
            self,
            images=self.images[idx],
            labels=self.labels[idx],
            sample_ids=[self.sample_ids[i] for i in idx],
            name=name or self.name,
            corruption_mask=None if self.corruption_mask is None else self.corruption_mask[idx],
            original_labels=None if self.original_labels is None else self.original_labels[idx],
            meta=dict(self.meta),
        )

    def with_labels(self, labels: np.ndarray, corruption_mask: np.ndarray, original_labels: np.ndarray,
                    name: Optional[str] = None) -> "LabeledDataset":
        return replace(self, labels=np.asarray(labels), corruption_mask=corruption_mask,
                       original_labels=original_labels, name=name or self.name, meta=dict(self.meta))

    def equals(self, other: "LabeledDataset") -> bool:
        """Bit-level equality of arrays and metadata."""
        same_mask = (self.corruption_mask is None) == (other.corruption_mask is None)
        if same_mask and self.corruption_mask is not None:
            same_mask = (np.array_equal(self.corruption_mask, other.corruption_mask)
                         and np.array_equal(self.original_labels, other.original_labels))
        return (
            self.images.shape == other.images.shape
            and self.images.tobytes() == other.images.tobytes()
            and np.array_equal(self.labels, other.labels)
            and self.sample_ids == other.sample_ids
            and self.class_count == other.class_count
            and same_mask
        )
