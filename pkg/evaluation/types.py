from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple, Union

from distances.types import DistanceKind

from .exceptions import MetricConfigError

CORRELATIONS = ("pearson", "spearman")


@dataclass
class RecoResult:
    reco: float
    best_threshold: float
    scan: List[Tuple[float, float, float]]
    reco_auc: float

    def to_dict(self) -> Dict[str, Any]:
        return {"reco": self.reco, "best_gamma": self.best_threshold, "reco_auc": self.reco_auc,
                "scan_size": len(self.scan)}


@dataclass
class MegeResult:
    mege: float
    mean_s_equal: float
    count: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FidelityConfig:
    subset_fraction: float = 0.15
    num_subsets: int = 64
    baseline: float = 0.0
    correlation: str = "pearson"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.subset_fraction <= 1:
            raise MetricConfigError(f"subset_fraction must lie in (0, 1], got {self.subset_fraction}")
        if int(self.num_subsets) < 2:
            raise MetricConfigError(f"num_subsets must be >= 2, got {self.num_subsets}")
        if self.correlation not in CORRELATIONS:
            raise MetricConfigError(f"correlation must be one of {CORRELATIONS}, got {self.correlation!r}")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class StabilityConfig:
    radius: float = 0.1
    num_neighbors: int = 32
    inner_distance: Union[str, DistanceKind] = "spearman_abs"
    seed: int = 0

    def __post_init__(self):
        if not self.radius >= 0:
            raise MetricConfigError(f"radius must be >= 0, got {self.radius}")
        if int(self.num_neighbors) < 1:
            raise MetricConfigError(f"num_neighbors must be >= 1, got {self.num_neighbors}")
        object.__setattr__(self, "inner_distance", DistanceKind.parse(self.inner_distance))

    def to_dict(self):
        return {"radius": self.radius, "num_neighbors": self.num_neighbors,
                "inner_distance": str(self.inner_distance), "seed": self.seed}


@dataclass
class CounterexampleReport:
    kl_consistent: float
    kl_inconsistent: float
    w1_consistent: float
    w1_inconsistent: float
    reco_consistent: float
    reco_inconsistent: float
    kl_closed_form_consistent: float
    kl_closed_form_inconsistent: float
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)
