"""
Tests for the engine's forward pass and reverse-mode gradients.
"""

import numpy as np
from django.test import SimpleTestCase

from engine.exceptions import ClassIndexError, LayerTypeError, ShapeMismatchError
from engine.layers import Conv2D, Dense, layer_from_spec
from engine.network import (
    ARCHITECTURES,
    activation_gradients,
    build_model,
    forward,
    forward_from,
    grad_wrt_activation,
    grad_wrt_input,
    input_gradients,
    predict,
)
from engine.training import softmax

FD_STEP = 1e-5


def central_differences(model, x, class_index):
    """Central finite differences of one logit, all coordinates in one batch."""
    d = x.size
    eye = np.eye(d).reshape((d,) + x.shape) * FD_STEP
    batch = np.concatenate([x[None] + eye, x[None] - eye], axis=0)
    logits = model.logits(batch)[:, class_index]
    return ((logits[:d] - logits[d:]) / (2 * FD_STEP)).reshape(x.shape)


def assert_close_relative(test, got, expected, rtol=1e-4, floor=1e-8):
    mask = np.abs(expected) > floor
    err = np.abs(got - expected)
    # absolute slack at the float64 cancellation level of the difference quotient
    test.assertTrue(np.all(err[mask] <= rtol * np.abs(expected[mask]) + 1e-9),
                    f"max relative error {np.max(err[mask] / np.abs(expected[mask])) if mask.any() else 0}")
    test.assertTrue(np.all(err[~mask] <= 1e-7))


class ForwardTestCase(SimpleTestCase):

    def test_identity_dense_returns_input(self):
        model = build_model([{"type": "dense"}], input_shape=(3,), class_count=3, seed=0)
        model.layers[0].set_params({"weight": np.eye(3), "bias": np.zeros(3)})
        trace = forward(model, np.array([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(trace.logits, [1.0, 2.0, 3.0])

    def test_softmax_of_equal_logits_is_uniform(self):
        np.testing.assert_allclose(softmax(np.array([0.0, 0.0])), [0.5, 0.5], atol=0)

    def test_two_layer_net_matches_hand_matrix_product(self):
        layers = [{"type": "dense", "units": 3}, {"type": "relu"}, {"type": "dense"}]
        model = build_model(layers, input_shape=(3,), class_count=3, seed=42)
        W1, b1 = model.layers[0].weight, model.layers[0].bias
        W2, b2 = model.layers[2].weight, model.layers[2].bias
        x = np.ones(3)
        hidden = [max(0.0, sum(W1[r, c] * x[c] for c in range(3)) + b1[r]) for r in range(3)]
        expected = [sum(W2[r, c] * hidden[c] for c in range(3)) + b2[r] for r in range(3)]
        np.testing.assert_allclose(forward(model, x).logits, expected, rtol=1e-12)

    def test_trace_has_one_activation_per_layer(self):
        model = build_model("small-cnn", (1, 8, 8), 4, seed=1)
        trace = forward(model, np.zeros((1, 8, 8)))
        self.assertEqual(len(trace), len(model.layers))
        self.assertEqual(trace.logits.shape, (4,))

    def test_shape_mismatch_names_layer(self):
        model = build_model("mlp", (1, 4, 4), 2, seed=0)
        with self.assertRaises(ShapeMismatchError) as ctx:
            forward(model, np.zeros((1, 5, 5)))
        self.assertIn("layer 0", str(ctx.exception))

    def test_build_rejects_inconsistent_layer_chain(self):
        with self.assertRaises(ShapeMismatchError):
            build_model([{"type": "avgpool2d", "size": 3}, {"type": "flatten"}, {"type": "dense"}],
                        (1, 4, 4), 2, seed=0)

    def test_unknown_architecture_and_layer(self):
        with self.assertRaises(LayerTypeError):
            build_model("resnet18", (1, 4, 4), 2, seed=0)
        with self.assertRaises(LayerTypeError):
            layer_from_spec({"type": "batchnorm"})

    def test_forward_is_deterministic(self):
        a = build_model("small-cnn", (1, 8, 8), 3, seed=7)
        b = build_model("small-cnn", (1, 8, 8), 3, seed=7)
        x = np.random.default_rng(0).uniform(size=(1, 8, 8))
        np.testing.assert_array_equal(forward(a, x).logits, forward(b, x).logits)

    def test_presets_build(self):
        for name in ARCHITECTURES:
            model = build_model(name, (1, 8, 8), 3, seed=0)
            self.assertEqual(predict(model, np.zeros((2, 1, 8, 8))).shape, (2,))


class InputGradientTestCase(SimpleTestCase):

    def test_linear_gradient_is_weight_row(self):
        model = build_model("linear", (1, 3, 3), 4, seed=3)
        x = np.random.default_rng(1).normal(size=(1, 3, 3))
        grad = grad_wrt_input(model, x, 2)
        np.testing.assert_array_equal(grad.ravel(), model.layers[1].weight[2])

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(2024)
        architectures = [
            [{"type": "flatten"}, {"type": "dense", "units": 6}, {"type": "softplus"}, {"type": "dense"}],
            [{"type": "flatten"}, {"type": "dense", "units": 6}, {"type": "relu"}, {"type": "dense"}],
            [{"type": "conv2d", "filters": 2, "kernel_size": 3}, {"type": "softplus"},
             {"type": "avgpool2d", "size": 2}, {"type": "flatten"}, {"type": "dense"}],
            [{"type": "conv2d", "filters": 2, "kernel_size": 3}, {"type": "relu"},
             {"type": "avgpool2d", "size": 2}, {"type": "flatten"}, {"type": "dense"}],
        ]
        for case in range(100):
            model = build_model(architectures[case % 4], (2, 4, 4), 3, seed=case)
            x = rng.uniform(-1, 1, size=(2, 4, 4))
            k = int(rng.integers(3))
            with self.subTest(case=case):
                assert_close_relative(self, grad_wrt_input(model, x, k), central_differences(model, x, k))

    def test_dead_relu_gives_zero_gradient(self):
        model = build_model("mlp", (1, 2, 2), 2, seed=0)
        model.layers[1].set_params({"weight": model.layers[1].weight, "bias": np.full(32, -100.0)})
        grad = grad_wrt_input(model, np.full((1, 2, 2), 0.5), 1)
        np.testing.assert_array_equal(grad, np.zeros((1, 2, 2)))

    def test_batched_gradients_match_single(self):
        model = build_model("small-cnn", (1, 8, 8), 3, seed=5)
        X = np.random.default_rng(3).uniform(size=(4, 1, 8, 8))
        batch = input_gradients(model, X, [0, 1, 2, 0])
        for i, k in enumerate([0, 1, 2, 0]):
            np.testing.assert_allclose(batch[i], grad_wrt_input(model, X[i], k), rtol=1e-12, atol=1e-15)

    def test_class_index_out_of_range(self):
        model = build_model("linear", (1, 2, 2), 2, seed=0)
        with self.assertRaises(ClassIndexError):
            grad_wrt_input(model, np.zeros((1, 2, 2)), 2)
        with self.assertRaises(ClassIndexError):
            grad_wrt_input(model, np.zeros((1, 2, 2)), -1)


class ActivationGradientTestCase(SimpleTestCase):

    def test_output_layer_gradient_is_one_hot(self):
        model = build_model("small-cnn", (1, 8, 8), 4, seed=0)
        grad = grad_wrt_activation(model, np.ones((1, 8, 8)), len(model.layers) - 1, 2)
        np.testing.assert_array_equal(grad, [0.0, 0.0, 1.0, 0.0])

    def test_matches_finite_differences_on_restarted_forward(self):
        model = build_model("small-cnn", (1, 8, 8), 3, seed=11)
        x = np.random.default_rng(4).uniform(size=(1, 8, 8))
        layer_index = model.conv_indices()[-1]
        acts, grad = activation_gradients(model, x[None], layer_index, 1)
        a = acts[0]
        fd = np.zeros_like(a)
        for pos in np.ndindex(a.shape):
            bump = np.zeros_like(a)
            bump[pos] = FD_STEP
            fd[pos] = (forward_from(model, a + bump, layer_index)[1]
                       - forward_from(model, a - bump, layer_index)[1]) / (2 * FD_STEP)
        assert_close_relative(self, grad[0], fd)

    def test_global_average_then_identity_gives_uniform_gradient(self):
        layers = [{"type": "conv2d", "filters": 1, "kernel_size": 1}, {"type": "avgpool2d", "size": 4},
                  {"type": "flatten"}, {"type": "dense"}]
        model = build_model(layers, (1, 4, 4), 1, seed=0)
        model.layers[3].set_params({"weight": np.ones((1, 1)), "bias": np.zeros(1)})
        grad = grad_wrt_activation(model, np.random.default_rng(0).uniform(size=(1, 4, 4)), 0, 0)
        np.testing.assert_allclose(grad, np.full((1, 4, 4), 1 / 16), rtol=1e-15)

    def test_non_conv_layer_rejected(self):
        model = build_model("small-cnn", (1, 8, 8), 2, seed=0)
        with self.assertRaises(LayerTypeError):
            grad_wrt_activation(model, np.zeros((1, 8, 8)), 1, 0)

    def test_conv_indices(self):
        model = build_model("small-cnn", (1, 8, 8), 2, seed=0)
        self.assertEqual(model.conv_indices(), [0, 3])
        self.assertIsInstance(model.layers[0], Conv2D)
        self.assertIsInstance(model.layers[-1], Dense)
