from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

import numpy as np

from engine.network import Model

from .types import AttributionConfig


class AttributionMethod(ABC):
    """Interface for explanation functions g(f, x) returning (values, raw)."""

    name = ""

    @abstractmethod
    def attribute(self, model: Model, x: np.ndarray, class_index: int, cfg: AttributionConfig,
                  sample_id: str = "") -> Tuple[np.ndarray, np.ndarray]:
        """Channel-reduced H x W map and the unreduced signed attribution."""
        pass

    def attribute_batch(self, model: Model, X: np.ndarray, class_indices: Sequence[int], cfg: AttributionConfig,
                        sample_ids: Sequence[str]) -> List[Tuple[np.ndarray, np.ndarray]]:
        return [self.attribute(model, x, int(k), cfg, sid) for x, k, sid in zip(X, class_indices, sample_ids)]
