import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from crosstraining.types import ExplanationBank
from pipeline.archives import (
    ExplanationArchive,
    bank_from_archives,
    load_bank,
    read_archive,
    save_bank,
    write_archive,
)
from pipeline.exceptions import ArchiveFormatError
from utils.containers import pack_container
from utils.exceptions import EXIT_DATA, MissingArtifactError


def archive(n=3, shape=(4, 5), seed=0, **kwargs):
    rng = np.random.default_rng(seed)
    defaults = dict(maps=rng.normal(size=(n,) + shape), method="SM", model_id="fold-0",
                    sample_ids=[f"s{i}" for i in range(n)], seed=seed, created="2026-01-01T00:00:00+00:00",
                    predictions=rng.integers(0, 3, size=n))
    defaults.update(kwargs)
    return ExplanationArchive(**defaults)


class ArchiveFileTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / "fold-0.xta"

    def test_write_then_read_is_bit_exact(self):
        original = archive()
        write_archive(original, self.path)
        loaded = read_archive(self.path)
        self.assertTrue(loaded.equals(original))
        self.assertEqual(loaded.maps.dtype, np.float32)
        self.assertEqual(loaded.map_shape, (4, 5))

    def test_payload_is_little_endian_float32_in_sample_order(self):
        original = archive(n=2, shape=(2, 2))
        write_archive(original, self.path)
        blob = self.path.read_bytes()
        payload = blob[-2 * 2 * 2 * 4:]
        np.testing.assert_array_equal(np.frombuffer(payload, dtype="<f4").reshape(2, 2, 2), original.maps)

    def test_truncated_payload(self):
        write_archive(archive(), self.path)
        self.path.write_bytes(self.path.read_bytes()[:-1])
        with self.assertRaises(ArchiveFormatError) as ctx:
            read_archive(self.path)
        self.assertIn("expected", str(ctx.exception))
        self.assertEqual(ctx.exception.exit_code, EXIT_DATA)

    def test_zero_sample_archive(self):
        empty = archive(n=0, map_shape=(4, 5), maps=np.zeros((0, 4, 5)), sample_ids=[], predictions=[])
        write_archive(empty, self.path)
        loaded = read_archive(self.path)
        self.assertEqual(len(loaded), 0)
        self.assertEqual(loaded.maps.shape, (0, 4, 5))
        self.assertTrue(loaded.equals(empty))

    def test_bad_magic(self):
        header = archive().header()
        header["magic"] = "XTM1"
        self.path.write_bytes(pack_container(header, archive().maps.astype("<f4").tobytes()))
        with self.assertRaises(ArchiveFormatError) as ctx:
            read_archive(self.path)
        self.assertIn("magic", str(ctx.exception))

    def test_unsupported_dtype(self):
        header = archive().header()
        header["dtype"] = "f64le"
        self.path.write_bytes(pack_container(header, archive().maps.astype("<f8").tobytes()))
        with self.assertRaises(ArchiveFormatError) as ctx:
            read_archive(self.path)
        self.assertIn("dtype", str(ctx.exception))

    def test_truncated_header(self):
        self.path.write_bytes(b"\x10\x00")
        with self.assertRaises(ArchiveFormatError):
            read_archive(self.path)

    def test_missing_file(self):
        with self.assertRaises(MissingArtifactError) as ctx:
            read_archive(self.path)
        self.assertIn("fold-0.xta", str(ctx.exception))

    def test_inconsistent_sample_ids(self):
        with self.assertRaises(ArchiveFormatError):
            archive(sample_ids=["only-one"])


class BankArchiveTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        rng = np.random.default_rng(3)
        self.bank = ExplanationBank(method="IG", maps=rng.uniform(size=(3, 6, 4, 4)),
                                    predictions=rng.integers(0, 2, size=(3, 6)),
                                    sample_ids=[f"x{i}" for i in range(6)])

    def test_bank_survives_archives_at_float32_precision(self):
        save_bank(self.bank, self.tmp.name, seed=9, created="t0")
        loaded = load_bank(self.tmp.name, 3)
        self.assertEqual(loaded.method, "IG")
        self.assertEqual(loaded.model_ids, ["fold-0", "fold-1", "fold-2"])
        np.testing.assert_array_equal(loaded.predictions, self.bank.predictions)
        np.testing.assert_array_equal(loaded.maps, self.bank.maps.astype(np.float32).astype(np.float64))
        self.assertEqual(read_archive(Path(self.tmp.name) / "fold-1.xta").seed, 9)

    def test_missing_fold_archive(self):
        save_bank(self.bank, self.tmp.name)
        (Path(self.tmp.name) / "fold-2.xta").unlink()
        with self.assertRaises(MissingArtifactError) as ctx:
            load_bank(self.tmp.name, 3)
        self.assertIn("fold-2.xta", str(ctx.exception))

    def test_mixed_methods_rejected(self):
        with self.assertRaises(ArchiveFormatError):
            bank_from_archives([archive(), archive(method="GC", model_id="fold-1")])

    def test_archives_without_predictions_rejected(self):
        with self.assertRaises(ArchiveFormatError):
            bank_from_archives([archive(predictions=None)])
