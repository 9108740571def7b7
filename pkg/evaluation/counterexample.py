"""
Why ReCo ranks thresholds instead of measuring a divergence.

Two constructions share the same S= / S!= shapes: the consistent one puts S=
below S!=, the mirrored one (every distance d replaced by 1 - d) puts it
above. KL and W1 cannot tell them apart, ReCo can.
"""

import logging

import numpy as np
from scipy.stats import entropy, wasserstein_distance

from utils.exceptions import ConfigError

from .consistency import reco_scan
from .types import CounterexampleReport

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 50
# keeps empty histogram bins from making the divergence infinite
HISTOGRAM_FLOOR = 1e-10


def gaussian_kl(mu1: float, sigma1: float, mu2: float, sigma2: float) -> float:
    """KL(N(mu1, sigma1^2) || N(mu2, sigma2^2))."""
    return float(np.log(sigma2 / sigma1) + (sigma1 ** 2 + (mu1 - mu2) ** 2) / (2 * sigma2 ** 2) - 0.5)


def histogram_kl(p_samples: np.ndarray, q_samples: np.ndarray, bins: int = HISTOGRAM_BINS) -> float:
    """KL between the histograms of two samples on shared bins over their joint range."""
    lo = min(p_samples.min(), q_samples.min())
    hi = max(p_samples.max(), q_samples.max())
    p, _ = np.histogram(p_samples, bins=bins, range=(lo, hi))
    q, _ = np.histogram(q_samples, bins=bins, range=(lo, hi))
    return float(entropy(p + HISTOGRAM_FLOOR, q + HISTOGRAM_FLOOR))


def dirac_w1(mu1: float, mu2: float) -> float:
    return float(wasserstein_distance([mu1], [mu2]))


def counterexample_oracle(mu1: float, mu2: float, sigma1: float, sigma2: float, n: int,
                          seed: int, bins: int = HISTOGRAM_BINS) -> CounterexampleReport:
    if not 0 < mu1 < mu2 < 1:
        raise ConfigError(f"need 0 < mu1 < mu2 < 1, got mu1={mu1}, mu2={mu2}")
    if not (sigma1 > 0 and sigma2 > 0):
        raise ConfigError(f"sigmas must be > 0, got {sigma1}, {sigma2}")
    if n < 100:
        raise ConfigError(f"n must be >= 100, got {n}")

    rng = np.random.default_rng(seed)
    s_equal = rng.normal(mu1, sigma1, size=n)
    s_diff = rng.normal(mu2, sigma2, size=n)
    # mirrored draws: N(1 - mu, sigma) samples that are the exact reflection of the consistent ones
    m_equal = 1.0 - s_equal
    m_diff = 1.0 - s_diff

    report = CounterexampleReport(
        kl_consistent=histogram_kl(s_equal, s_diff, bins),
        kl_inconsistent=histogram_kl(m_equal, m_diff, bins),
        w1_consistent=float(wasserstein_distance(s_equal, s_diff)),
        w1_inconsistent=float(wasserstein_distance(m_equal, m_diff)),
        reco_consistent=reco_scan(s_equal, s_diff).reco,
        reco_inconsistent=reco_scan(m_equal, m_diff).reco,
        kl_closed_form_consistent=gaussian_kl(mu1, sigma1, mu2, sigma2),
        kl_closed_form_inconsistent=gaussian_kl(1.0 - mu1, sigma1, 1.0 - mu2, sigma2),
        params={"mu1": mu1, "mu2": mu2, "sigma1": sigma1, "sigma2": sigma2, "n": n, "seed": seed, "bins": bins},
    )
    logger.info("Counterexample: reco %.4f vs %.4f, W1 %.4f vs %.4f", report.reco_consistent,
                report.reco_inconsistent, report.w1_consistent, report.w1_inconsistent)
    return report
