from typing import Callable, Union

import numpy as np

from attribution.types import ExplanationMap

from .exceptions import DistanceShapeError
from .strategies import STRATEGIES, spearman_rho
from .types import DistanceKind

MapLike = Union[ExplanationMap, np.ndarray]
DistanceFn = Callable[[np.ndarray, np.ndarray], float]

__all__ = ["distance", "distance_function", "spearman_rho"]


def _values(m: MapLike) -> np.ndarray:
    return m.values if isinstance(m, ExplanationMap) else np.asarray(m, dtype=np.float64)


def distance(kind: Union[str, DistanceKind], a: MapLike, b: MapLike, sample_id: str = "") -> float:
    """d(a, b) for one of the shipped kinds; identical inputs give exactly 0."""
    kind = DistanceKind.parse(kind)
    if not sample_id and isinstance(a, ExplanationMap):
        sample_id = a.sample_id
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise DistanceShapeError(f"cannot compare maps of shape {va.shape} and {vb.shape} ({sample_id or 'unnamed'})")
    if np.array_equal(va, vb):
        return 0.0
    return STRATEGIES[kind.name].compute(va, vb, kind, sample_id)


def distance_function(kind: Union[str, DistanceKind, DistanceFn]) -> DistanceFn:
    """A two-argument callable for a kind; callables pass through unchanged."""
    if callable(kind) and not isinstance(kind, DistanceKind):
        return kind
    parsed = DistanceKind.parse(kind)
    return lambda a, b: distance(parsed, a, b)
