from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase

from dataset.generators import gen_shapes
from distances.exceptions import DegenerateInputError
from engine.network import build_model
from evaluation.services import average_fidelity, average_stability


class SampleAverageTestCase(SimpleTestCase):

    def setUp(self):
        self.data = gen_shapes(12, 8, 2, seed=0)
        self.model = build_model("mlp", (1, 8, 8), 2, seed=0)

    def test_stability_of_linear_saliency_averages_to_zero(self):
        model = build_model("linear", (1, 8, 8), 2, seed=1)
        result = average_stability(model, self.data, "SM", limit=5)
        self.assertEqual((result.mean, result.used, result.skipped), (0.0, 5, 0))

    def test_fidelity_average_is_a_correlation(self):
        result = average_fidelity(self.model, self.data, "GI", limit=4)
        self.assertEqual(result.used + result.skipped, 4)
        self.assertLessEqual(abs(result.mean), 1.0)

    def test_degenerate_samples_are_counted(self):
        with patch("evaluation.services.fidelity_mu", side_effect=[0.5, DegenerateInputError("flat"), 0.7]):
            result = average_fidelity(self.model, self.data, "SM", limit=3)
        self.assertEqual((result.used, result.skipped), (2, 1))
        self.assertAlmostEqual(result.mean, 0.6)

    def test_all_skipped_gives_no_mean(self):
        with patch("evaluation.services.stability_details", side_effect=DegenerateInputError("flat")):
            result = average_stability(self.model, self.data, "SM", limit=2)
        self.assertIsNone(result.mean)
        self.assertEqual(result.to_dict(), {"mean": None, "used": 0, "skipped": 2})
