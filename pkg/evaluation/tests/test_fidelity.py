import numpy as np
from django.test import SimpleTestCase

from attribution.services import gradient_input, integrated_gradients, saliency
from attribution.types import ExplanationMap
from distances.exceptions import DegenerateInputError
from engine.network import build_model
from evaluation.exceptions import MetricConfigError
from evaluation.fidelity import attribution_map, fidelity_mu, subset_size
from evaluation.types import FidelityConfig


class FidelityTestCase(SimpleTestCase):

    def test_linear_model_with_gradient_input_is_exactly_correlated(self):
        # mixed-sign weights, zero bias: the score drop equals the signed attribution sum
        model = build_model("linear", (1, 4, 4), 3, seed=0)
        self.assertTrue((model.layers[1].weight < 0).any() and (model.layers[1].weight > 0).any())
        x = np.random.default_rng(0).uniform(0.1, 1.0, size=(1, 4, 4))
        phi = gradient_input(model, x, 1)
        self.assertAlmostEqual(fidelity_mu(model, x, phi), 1.0, delta=1e-12)

    def test_linear_model_with_multichannel_input(self):
        model = build_model("linear", (3, 4, 4), 2, seed=4)
        x = np.random.default_rng(6).uniform(-1.0, 1.0, size=(3, 4, 4))
        self.assertAlmostEqual(fidelity_mu(model, x, gradient_input(model, x, 0)), 1.0, delta=1e-12)

    def test_spearman_variant(self):
        model = build_model("linear", (1, 4, 4), 3, seed=2)
        x = np.random.default_rng(1).uniform(0.1, 1.0, size=(1, 4, 4))
        value = fidelity_mu(model, x, gradient_input(model, x, 0), FidelityConfig(correlation="spearman"))
        self.assertGreater(value, 0.99)

    def test_signed_attribution_only_for_gradient_times_input_methods(self):
        model = build_model("linear", (2, 4, 4), 2, seed=1)
        x = np.random.default_rng(7).uniform(size=(2, 4, 4))
        gi = gradient_input(model, x, 0)
        np.testing.assert_array_equal(attribution_map(gi, (4, 4)), gi.raw.sum(axis=0))
        ig = integrated_gradients(model, x, 0)
        np.testing.assert_array_equal(attribution_map(ig, (4, 4)), ig.raw.sum(axis=0))
        sm = saliency(model, x, 0)
        np.testing.assert_array_equal(attribution_map(sm, (4, 4)), sm.values)
        bare = np.ones((4, 4))
        np.testing.assert_array_equal(attribution_map(bare, (4, 4)), bare)

    def test_random_explanation_is_decorrelated(self):
        model = build_model("linear", (1, 28, 28), 2, seed=3)
        x = np.random.default_rng(2).uniform(size=(1, 28, 28))
        noise = ExplanationMap(np.random.default_rng(3).uniform(size=(28, 28)), "SM", class_index=0)
        value = fidelity_mu(model, x, noise, FidelityConfig(num_subsets=1000))
        self.assertLess(abs(value), 0.2)

    def test_constant_model_is_degenerate(self):
        model = build_model("linear", (1, 4, 4), 2, seed=0)
        model.layers[1].set_params({"weight": np.zeros((2, 16)), "bias": np.zeros(2)})
        phi = ExplanationMap(np.random.default_rng(4).uniform(size=(4, 4)), "SM", sample_id="s-7")
        with self.assertRaises(DegenerateInputError) as ctx:
            fidelity_mu(model, np.ones((1, 4, 4)), phi)
        self.assertIn("s-7", str(ctx.exception))

    def test_shape_mismatch(self):
        model = build_model("linear", (1, 4, 4), 2, seed=0)
        with self.assertRaises(MetricConfigError):
            fidelity_mu(model, np.ones((1, 4, 4)), ExplanationMap(np.ones((3, 3)), "SM"))

    def test_same_seed_same_value(self):
        model = build_model("mlp", (1, 4, 4), 2, seed=5)
        x = np.random.default_rng(5).uniform(size=(1, 4, 4))
        phi = gradient_input(model, x, 0)
        cfg = FidelityConfig(seed=9)
        self.assertEqual(fidelity_mu(model, x, phi, cfg), fidelity_mu(model, x, phi, cfg))

    def test_subset_size(self):
        cfg = FidelityConfig()
        self.assertEqual(subset_size(cfg, 16), 3)
        self.assertEqual(subset_size(cfg, 100), 15)
        self.assertEqual(subset_size(FidelityConfig(subset_fraction=0.01), 16), 1)

    def test_config_validation(self):
        for kwargs in ({"subset_fraction": 0}, {"num_subsets": 1}, {"correlation": "kendall"}):
            with self.subTest(**kwargs), self.assertRaises(MetricConfigError):
                FidelityConfig(**kwargs)
