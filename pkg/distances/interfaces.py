from abc import ABC, abstractmethod

import numpy as np


class DistanceStrategy(ABC):
    """Interface for d(a, b) >= 0 between two equally shaped, non-identical maps."""

    name = ""

    @abstractmethod
    def compute(self, a: np.ndarray, b: np.ndarray, kind, sample_id: str = "") -> float:
        pass
