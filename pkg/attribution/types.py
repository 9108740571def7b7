from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from .exceptions import AttributionConfigError, ExplanationShapeError


class Method(str, Enum):
    SM = "SM"
    GI = "GI"
    IG = "IG"
    SG = "SG"
    GC = "GC"


@dataclass(frozen=True)
class AttributionConfig:
    ig_steps: int = 60
    ig_baseline: Union[float, np.ndarray] = 0.0
    sg_samples: int = 60
    sg_sigma: float = 0.2
    # mean |gradient| when true, signed mean gradient otherwise
    sg_abs: bool = True
    rng_seed: int = 0

    def __post_init__(self):
        if int(self.ig_steps) < 2:
            raise AttributionConfigError(f"ig_steps must be >= 2, got {self.ig_steps}")
        if int(self.sg_samples) < 1:
            raise AttributionConfigError(f"sg_samples must be >= 1, got {self.sg_samples}")
        if not self.sg_sigma > 0:
            raise AttributionConfigError(f"sg_sigma must be > 0, got {self.sg_sigma}")

    def to_dict(self):
        data = asdict(self)
        if isinstance(self.ig_baseline, np.ndarray):
            data["ig_baseline"] = self.ig_baseline.tolist()
        return data


@dataclass
class ExplanationMap:
    """Channel-reduced relevance map of one (model, sample) pair.

    ``raw`` keeps the signed input-shaped attribution (the pre-upsampling CAM
    for Grad-CAM) so sums such as IG completeness can be checked.
    """

    values: np.ndarray
    method: str
    model_id: str = ""
    sample_id: str = ""
    predicted_class: int = -1
    class_index: int = -1
    raw: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ExplanationShapeError(f"explanation for {self.sample_id!r} must be H x W, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ExplanationShapeError(f"explanation for {self.sample_id!r} has non-finite values")
        self.method = Method(self.method).value

    @property
    def shape(self):
        return self.values.shape
