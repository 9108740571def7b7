import numpy as np
from scipy.stats import rankdata
from skimage.metrics import structural_similarity

from .exceptions import DegenerateInputError, DistanceShapeError
from .interfaces import DistanceStrategy

SSIM_WINDOW = 7
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def spearman_rho(a, b, sample_id: str = "") -> float:
    """Pearson correlation of average ranks; ties share their mean rank."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DistanceShapeError(f"spearman_rho needs equal sizes, got {a.size} and {b.size}")
    if a.size < 2:
        raise DegenerateInputError("spearman_rho needs at least 2 elements", sample_id)
    ra = rankdata(a, method="average")
    rb = rankdata(b, method="average")
    da = ra - ra.mean()
    db = rb - rb.mean()
    ssa, ssb = np.dot(da, da), np.dot(db, db)
    if ssa == 0 or ssb == 0:
        raise DegenerateInputError("constant map has zero rank variance", sample_id)
    return float(np.clip(np.dot(da, db) / np.sqrt(ssa * ssb), -1.0, 1.0))


class SpearmanAbsDistance(DistanceStrategy):
    name = "spearman_abs"

    def compute(self, a, b, kind, sample_id=""):
        return max(0.0, 1.0 - abs(spearman_rho(a, b, sample_id)))


class L1Distance(DistanceStrategy):
    name = "l1"

    def compute(self, a, b, kind, sample_id=""):
        return float(np.sum(np.abs(a - b)))


class L2Distance(DistanceStrategy):
    name = "l2"

    def compute(self, a, b, kind, sample_id=""):
        diff = (a - b).ravel()
        return float(np.sqrt(np.dot(diff, diff)))


class SsimDistance(DistanceStrategy):
    """1 - SSIM with a uniform window, shrunk to the largest odd size that fits."""

    name = "ssim"

    def compute(self, a, b, kind, sample_id=""):
        if a.ndim != 2:
            raise DistanceShapeError(f"ssim needs 2-D maps, got shape {a.shape}")
        win = min(SSIM_WINDOW, *a.shape)
        if win % 2 == 0:
            win -= 1
        if win < 3:
            raise DistanceShapeError(f"ssim needs maps of at least 3 x 3, got {a.shape}")
        if np.ptp(a) == 0 or np.ptp(b) == 0:
            raise DegenerateInputError("constant map has no structure for ssim", sample_id)
        data_range = float(max(a.max(), b.max()) - min(a.min(), b.min()))
        score = structural_similarity(a, b, win_size=win, data_range=data_range, K1=SSIM_K1, K2=SSIM_K2,
                                      gaussian_weights=False)
        return max(0.0, 1.0 - float(score))


class DiceDistance(DistanceStrategy):
    """1 - Dice overlap of the pixels at or above each map's own quantile."""

    name = "dice"

    def compute(self, a, b, kind, sample_id=""):
        q = kind.dice_threshold
        set_a = a >= np.quantile(a, q)
        set_b = b >= np.quantile(b, q)
        total = int(set_a.sum() + set_b.sum())
        if total == 0:
            return 0.0
        return max(0.0, 1.0 - 2.0 * int(np.sum(set_a & set_b)) / total)


STRATEGIES = {s.name: s for s in (SpearmanAbsDistance(), L1Distance(), L2Distance(), SsimDistance(), DiceDistance())}
