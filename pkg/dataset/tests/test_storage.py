import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from dataset.generators import gen_shapes
from dataset.storage import load_dataset, save_dataset
from dataset.types import LabeledDataset
from utils.exceptions import ContainerFormatError, MissingArtifactError


class DatasetStorageTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / "data.xtd"

    def test_round_trip_bit_equal(self):
        data = gen_shapes(30, 8, 3, seed=5)
        loaded = load_dataset(save_dataset(data, self.path))
        self.assertTrue(data.equals(loaded))
        self.assertEqual(loaded.meta["seed"], 5)

    def test_round_trip_keeps_corruption_mask(self):
        data = gen_shapes(10, 8, 2, seed=0)
        mask = np.zeros(10, dtype=bool)
        mask[:3] = True
        corrupted = data.with_labels(np.where(mask, 1 - data.labels, data.labels), mask, data.labels.copy())
        loaded = load_dataset(save_dataset(corrupted, self.path))
        self.assertTrue(corrupted.equals(loaded))
        np.testing.assert_array_equal(loaded.corruption_mask, mask)

    def test_empty_dataset(self):
        empty = LabeledDataset(np.zeros((0, 1, 4, 4)), np.zeros(0), class_count=2)
        self.assertEqual(len(load_dataset(save_dataset(empty, self.path))), 0)

    def test_truncated_file(self):
        save_dataset(gen_shapes(4, 8, 2, seed=0), self.path)
        self.path.write_bytes(self.path.read_bytes()[:-8])
        with self.assertRaises(ContainerFormatError):
            load_dataset(self.path)

    def test_missing_file(self):
        with self.assertRaises(MissingArtifactError):
            load_dataset(self.path)
