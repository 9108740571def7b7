"""
Sanity harnesses that qualify a candidate distance.

Spatial test: a Gaussian bump slides from the top-left to the top-right
corner; the distance to the first mask must grow with the step index.
Noise test: the mean distance between a base map and its noisy copies must
grow with the noise level.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from utils.exceptions import ConfigError

from .exceptions import DegenerateInputError
from .services import DistanceFn, distance_function
from .strategies import spearman_rho
from .types import DistanceKind

logger = logging.getLogger(__name__)

SPATIAL_PASS = 0.99
NOISE_PASS = 0.95
DEFAULT_SIGMAS = tuple(round(0.05 * i, 2) for i in range(1, 11))
MONOTONE_SLACK = 1e-12


@dataclass
class SanityReport:
    test: str
    kind: str
    distance_series: List[Tuple[int, float]]
    x_values: List[float]
    monotone_fraction: float
    spearman_vs_index: float
    passed: bool
    threshold: float
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["distance_series"] = [[int(i), float(d)] for i, d in self.distance_series]
        if math.isnan(self.spearman_vs_index):
            data["spearman_vs_index"] = None
        return data

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "test": self.test,
            "kind": self.kind,
            "step_index": [i for i, _ in self.distance_series],
            "x": self.x_values,
            "distance": [d for _, d in self.distance_series],
        })


def _kind_name(kind) -> str:
    if isinstance(kind, (str, DistanceKind)):
        return str(DistanceKind.parse(kind))
    return getattr(kind, "__name__", type(kind).__name__)


def _rank_trend(x: Sequence[float], y: Sequence[float]) -> float:
    try:
        return spearman_rho(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))
    except DegenerateInputError:
        return float("nan")


def _report(test, kind, distances, x_values, threshold, params) -> SanityReport:
    distances = np.asarray(distances, dtype=np.float64)
    steps = np.diff(distances)
    monotone = float(np.mean(steps >= -MONOTONE_SLACK)) if steps.size else 1.0
    rho = _rank_trend(x_values, distances)
    passed = bool(not math.isnan(rho) and rho >= threshold)
    report = SanityReport(
        test=test,
        kind=_kind_name(kind),
        distance_series=[(i, float(d)) for i, d in enumerate(distances)],
        x_values=[float(v) for v in x_values],
        monotone_fraction=monotone,
        spearman_vs_index=rho,
        passed=passed,
        threshold=threshold,
        params=params,
    )
    logger.info("Sanity %s for %s: rho=%.4f passed=%s", test, report.kind, rho, passed)
    return report


def spatial_masks(image_size: int, steps: int) -> np.ndarray:
    """Unit-mass Gaussian bumps on the top row, centre sliding from column 0 to the last column."""
    rows = np.arange(image_size, dtype=np.float64)[:, None]
    cols = np.arange(image_size, dtype=np.float64)[None, :]
    sigma_col = image_size / 4.0
    sigma_row = image_size / 32.0
    row_profile = np.exp(-rows ** 2 / (2 * sigma_row ** 2))
    masks = []
    for centre in np.linspace(0.0, image_size - 1.0, steps):
        mask = row_profile * np.exp(-(cols - centre) ** 2 / (2 * sigma_col ** 2))
        masks.append(mask / mask.sum())
    return np.stack(masks)


def noise_base(image_size: int = 32) -> np.ndarray:
    """Centred isotropic bump of peak 1."""
    grid = np.arange(image_size, dtype=np.float64) - (image_size - 1) / 2.0
    sigma = image_size / 4.0
    return np.exp(-(grid[:, None] ** 2 + grid[None, :] ** 2) / (2 * sigma ** 2))


def sanity_spatial(kind: Union[str, DistanceKind, DistanceFn], image_size: int = 32, steps: int = 100,
                   threshold: float = SPATIAL_PASS) -> SanityReport:
    if steps < 2:
        raise ConfigError(f"steps must be >= 2, got {steps}")
    if image_size < 3:
        raise ConfigError(f"image_size must be >= 3, got {image_size}")
    fn = distance_function(kind)
    masks = spatial_masks(image_size, steps)
    distances = [fn(masks[0], mask) for mask in masks]
    return _report("spatial", kind, distances, list(range(steps)), threshold,
                   {"image_size": image_size, "steps": steps})


def sanity_noise(kind: Union[str, DistanceKind, DistanceFn], base: Optional[np.ndarray] = None,
                 sigmas: Sequence[float] = DEFAULT_SIGMAS, repeats: int = 50, seed: int = 0,
                 threshold: float = NOISE_PASS) -> SanityReport:
    sigmas = [float(s) for s in sigmas]
    if not sigmas or any(s < 0 for s in sigmas) or any(b <= a for a, b in zip(sigmas, sigmas[1:])):
        raise ConfigError(f"sigmas must be non-negative and strictly increasing, got {sigmas}")
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    base = noise_base() if base is None else np.asarray(base, dtype=np.float64)
    fn = distance_function(kind)
    rng = np.random.default_rng(seed)
    means = []
    for sigma in sigmas:
        total = 0.0
        for _ in range(repeats):
            noisy = base + rng.normal(0.0, sigma, size=base.shape) if sigma > 0 else base.copy()
            total += fn(base, noisy)
        means.append(total / repeats)
    return _report("noise", kind, means, sigmas, threshold,
                   {"base_shape": list(base.shape), "repeats": repeats, "seed": seed})
