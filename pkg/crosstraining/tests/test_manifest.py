import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from crosstraining.ensemble import train_ensemble
from crosstraining.manifest import MANIFEST_NAME, load_ensemble, save_ensemble
from engine.storage import model_to_bytes
from utils.exceptions import MissingArtifactError

from .factories import FAST_TRAINING, quadrant_dataset


class ManifestTestCase(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.ensemble = train_ensemble(quadrant_dataset(40, seed=6), 2, "linear", FAST_TRAINING, seed=2)

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name) / "ensemble"

    def test_round_trip(self):
        save_ensemble(self.ensemble, self.dir)
        loaded = load_ensemble(self.dir)
        self.assertEqual(loaded.k, 2)
        self.assertEqual(loaded.accuracies, self.ensemble.accuracies)
        self.assertEqual(loaded.seeds, self.ensemble.seeds)
        for a, b in zip(loaded.blocks, self.ensemble.blocks):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(loaded.models, self.ensemble.models):
            self.assertEqual(model_to_bytes(a), model_to_bytes(b))

    def test_manifest_lists_blocks_seeds_and_files(self):
        data = json.loads(save_ensemble(self.ensemble, self.dir).read_text())
        self.assertEqual(data["model_files"], ["fold-0.xtm", "fold-1.xtm"])
        self.assertEqual(data["k"], 2)
        self.assertIn("init", data["seeds"])

    def test_missing_model_file_is_named(self):
        save_ensemble(self.ensemble, self.dir)
        (self.dir / "fold-1.xtm").unlink()
        with self.assertRaises(MissingArtifactError) as ctx:
            load_ensemble(self.dir)
        self.assertIn("fold-1.xtm", str(ctx.exception))
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_missing_manifest(self):
        with self.assertRaises(MissingArtifactError) as ctx:
            load_ensemble(self.dir)
        self.assertIn(MANIFEST_NAME, str(ctx.exception))
