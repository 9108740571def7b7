"""
ReCo, ReCo_AUC and MeGe from the S= / S!= distance multisets.

Threshold scan, for every candidate gamma drawn from S = S= + S!=:

    TPR(gamma) = |{d in S=  : d < gamma}| / |{d in S : d < gamma}|
    TNR(gamma) = |{d in S!= : d > gamma}| / |{d in S : d > gamma}|

with strict inequalities and 0 for an empty denominator. ReCo is the maximum
of TPR + TNR - 1 clamped to [0, 1].
"""

import logging
from typing import Any

import numpy as np
from scipy.integrate import trapezoid

from .exceptions import UndefinedMetricError
from .types import MegeResult, RecoResult

logger = logging.getLogger(__name__)


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    return np.divide(num, den, out=np.zeros(len(num)), where=den > 0)


def _multiset(values, name: str) -> np.ndarray:
    arr = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if arr.size == 0:
        raise UndefinedMetricError(f"{name} is empty; the metric is undefined")
    if not np.all(np.isfinite(arr)):
        raise UndefinedMetricError(f"{name} holds non-finite distances")
    return arr


def threshold_scan(s_equal, s_diff):
    """(gammas, TPR, TNR) over the sorted unique distances of S= and S!=."""
    eq = _multiset(s_equal, "S=")
    diff = _multiset(s_diff, "S!=")
    gammas = np.unique(np.concatenate([eq, diff]))

    eq_below = np.searchsorted(eq, gammas, side="left")
    diff_below = np.searchsorted(diff, gammas, side="left")
    eq_above = len(eq) - np.searchsorted(eq, gammas, side="right")
    diff_above = len(diff) - np.searchsorted(diff, gammas, side="right")

    tpr = _ratio(eq_below.astype(np.float64), (eq_below + diff_below).astype(np.float64))
    tnr = _ratio(diff_above.astype(np.float64), (eq_above + diff_above).astype(np.float64))
    return gammas, tpr, tnr


def reco_scan(s_equal, s_diff) -> RecoResult:
    gammas, tpr, tnr = threshold_scan(s_equal, s_diff)
    balanced = tpr + tnr - 1.0
    best = int(np.argmax(balanced))
    value = float(min(1.0, max(0.0, balanced[best])))
    if len(gammas) > 1:
        auc = float(trapezoid(balanced, gammas) / (gammas[-1] - gammas[0]))
    else:
        auc = float(balanced[0])
    return RecoResult(
        reco=value,
        best_threshold=float(gammas[best]),
        scan=[(float(g), float(p), float(n)) for g, p, n in zip(gammas, tpr, tnr)],
        reco_auc=auc,
    )


def reco(sets: Any) -> RecoResult:
    """ReCo of anything carrying ``s_equal`` and ``s_diff``."""
    result = reco_scan(sets.s_equal, sets.s_diff)
    logger.debug("ReCo=%.4f at gamma=%.6f (AUC %.4f)", result.reco, result.best_threshold, result.reco_auc)
    return result


def reco_auc(sets: Any) -> float:
    return reco(sets).reco_auc


def mege_of(s_equal) -> MegeResult:
    eq = _multiset(s_equal, "S=")
    mean = float(np.mean(eq))
    return MegeResult(mege=1.0 / (1.0 + mean), mean_s_equal=mean, count=int(eq.size))


def mege(sets: Any) -> MegeResult:
    return mege_of(sets.s_equal)
