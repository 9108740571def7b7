from types import SimpleNamespace

import numpy as np
from django.test import SimpleTestCase

from evaluation.consistency import mege, mege_of, reco, reco_scan
from evaluation.exceptions import UndefinedMetricError


def sets(s_equal, s_diff):
    return SimpleNamespace(s_equal=np.asarray(s_equal, float), s_diff=np.asarray(s_diff, float))


def brute_force_reco(s_equal, s_diff):
    """Every candidate threshold, counted one element at a time."""
    everything = list(s_equal) + list(s_diff)
    best = 0.0
    for gamma in everything:
        below_eq = sum(1 for d in s_equal if d < gamma)
        below = sum(1 for d in everything if d < gamma)
        above_diff = sum(1 for d in s_diff if d > gamma)
        above = sum(1 for d in everything if d > gamma)
        tpr = below_eq / below if below else 0.0
        tnr = above_diff / above if above else 0.0
        best = max(best, tpr + tnr - 1.0)
    return min(1.0, best)


class RecoTestCase(SimpleTestCase):

    def test_separable_sets(self):
        result = reco(sets([0.1, 0.2], [0.8, 0.9]))
        self.assertEqual(result.reco, 1.0)
        self.assertEqual(result.best_threshold, 0.8)

    def test_interleaved_sets(self):
        result = reco(sets([0.2, 0.4], [0.3, 0.5]))
        self.assertEqual(result.reco, 0.5)
        self.assertEqual(result.best_threshold, 0.3)
        scan = dict((g, (p, n)) for g, p, n in result.scan)
        self.assertEqual(scan[0.4], (0.5, 1.0))

    def test_identical_multisets_clamp_to_zero(self):
        self.assertEqual(reco(sets([0.1, 0.3, 0.3, 0.7], [0.1, 0.3, 0.3, 0.7])).reco, 0.0)

    def test_matches_brute_force_enumerator(self):
        rng = np.random.default_rng(0)
        for case in range(200):
            n_eq = int(rng.integers(1, 7))
            n_diff = int(rng.integers(1, 7))
            # a coarse grid forces ties between and within the multisets
            s_equal = (rng.integers(0, 8, size=n_eq) / 8).tolist()
            s_diff = (rng.integers(0, 8, size=n_diff) / 8).tolist()
            with self.subTest(case=case):
                self.assertEqual(reco_scan(s_equal, s_diff).reco, brute_force_reco(s_equal, s_diff))

    def test_bounded(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            value = reco_scan(rng.uniform(size=9), rng.uniform(size=5)).reco
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 1.0)

    def test_shifting_separated_s_diff_never_decreases(self):
        s_equal, s_diff = [0.1, 0.2, 0.25], [0.3, 0.6]
        base = reco_scan(s_equal, s_diff).reco
        for c in (0.01, 0.5, 3.0):
            self.assertGreaterEqual(reco_scan(s_equal, [d + c for d in s_diff]).reco, base)

    def test_invariant_under_monotone_rescaling(self):
        rng = np.random.default_rng(2)
        s_equal, s_diff = rng.uniform(size=12), rng.uniform(size=8)
        base = reco_scan(s_equal, s_diff)
        scaled = reco_scan(np.exp(3 * s_equal), np.exp(3 * s_diff))
        self.assertEqual(scaled.reco, base.reco)
        affine = reco_scan(2 * s_equal + 1, 2 * s_diff + 1)
        self.assertAlmostEqual(affine.reco_auc, base.reco_auc, delta=1e-12)

    def test_auc_of_separable_sets_is_positive(self):
        result = reco_scan([0.1, 0.2], [0.8, 0.9])
        self.assertGreater(result.reco_auc, 0.0)
        self.assertLessEqual(result.reco_auc, 1.0)

    def test_empty_multiset_is_named(self):
        with self.assertRaises(UndefinedMetricError) as ctx:
            reco(sets([0.1], []))
        self.assertIn("S!=", str(ctx.exception))
        with self.assertRaises(UndefinedMetricError) as ctx:
            reco(sets([], [0.1]))
        self.assertIn("S=", str(ctx.exception))


class MegeTestCase(SimpleTestCase):

    def test_zero_distances(self):
        self.assertEqual(mege(sets([0, 0, 0], [1])).mege, 1.0)

    def test_unit_distances(self):
        self.assertEqual(mege_of([1, 1]).mege, 0.5)

    def test_hand_computed_mean(self):
        result = mege_of([0.2, 0.4, 0.6])
        self.assertAlmostEqual(result.mege, 1 / 1.4, delta=1e-12)
        self.assertAlmostEqual(result.mean_s_equal, 0.4, delta=1e-12)
        self.assertEqual(result.count, 3)

    def test_strictly_decreasing_in_mean(self):
        values = [mege_of([m]).mege for m in (0.0, 0.1, 0.5, 2.0)]
        self.assertEqual(values, sorted(values, reverse=True))
        self.assertEqual(len(set(values)), 4)

    def test_empty_s_equal(self):
        with self.assertRaises(UndefinedMetricError):
            mege_of([])
