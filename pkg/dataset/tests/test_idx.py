"""
IDX fixtures are written byte by byte here, independently of the reader.
"""

import gzip
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from dataset.exceptions import IdxFormatError
from dataset.idx import load_idx
from utils.exceptions import MissingArtifactError


def be32(value):
    return bytes([(value >> 24) & 0xFF, (value >> 16) & 0xFF, (value >> 8) & 0xFF, value & 0xFF])


def image_file(pixels, magic=2051):
    n, rows, cols = len(pixels), len(pixels[0]), len(pixels[0][0])
    body = bytes(v for img in pixels for row in img for v in row)
    return be32(magic) + be32(n) + be32(rows) + be32(cols) + body


def label_file(labels, magic=2049):
    return be32(magic) + be32(len(labels)) + bytes(labels)


class LoadIdxTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)
        self.pixels = [[[(i * 28 + j + k) % 256 for j in range(28)] for i in range(28)] for k in range(2)]

    def write(self, name, blob):
        path = self.root / name
        path.write_bytes(blob)
        return path

    def test_two_image_fixture(self):
        images = self.write("imgs-idx3-ubyte", image_file(self.pixels))
        labels = self.write("lbls-idx1-ubyte", label_file([7, 2]))
        data = load_idx(images, labels)
        self.assertEqual(data.images.shape, (2, 1, 28, 28))
        np.testing.assert_array_equal(data.labels, [7, 2])
        self.assertEqual(data.class_count, 10)
        self.assertEqual(data.images[1, 0, 3, 5], ((3 * 28 + 5 + 1) % 256) / 255.0)
        self.assertEqual(data.images[0, 0, 27, 27], ((27 * 28 + 27) % 256) / 255.0)

    def test_gzip_files(self):
        images = self.write("imgs.gz", gzip.compress(image_file(self.pixels)))
        labels = self.write("lbls.gz", gzip.compress(label_file([1, 0])))
        np.testing.assert_array_equal(load_idx(images, labels).labels, [1, 0])

    def test_wrong_magic_names_offset(self):
        images = self.write("imgs", image_file(self.pixels, magic=2049))
        labels = self.write("lbls", label_file([7, 2]))
        with self.assertRaises(IdxFormatError) as ctx:
            load_idx(images, labels)
        self.assertEqual(ctx.exception.offset, 0)
        self.assertIn("offset 0", str(ctx.exception))
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_truncated_pixels(self):
        images = self.write("imgs", image_file(self.pixels)[:-1])
        labels = self.write("lbls", label_file([7, 2]))
        with self.assertRaises(IdxFormatError):
            load_idx(images, labels)

    def test_count_mismatch(self):
        images = self.write("imgs", image_file(self.pixels))
        labels = self.write("lbls", label_file([7, 2, 3]))
        with self.assertRaises(IdxFormatError):
            load_idx(images, labels)

    def test_limit_zero_gives_empty_dataset(self):
        images = self.write("imgs", image_file(self.pixels))
        labels = self.write("lbls", label_file([7, 2]))
        data = load_idx(images, labels, limit=0)
        self.assertEqual(len(data), 0)
        self.assertEqual(data.images.shape, (0, 1, 28, 28))
        self.assertEqual(data.class_count, 10)

    def test_limit_truncates(self):
        images = self.write("imgs", image_file(self.pixels))
        labels = self.write("lbls", label_file([7, 2]))
        np.testing.assert_array_equal(load_idx(images, labels, limit=1).labels, [7])

    def test_missing_file(self):
        with self.assertRaises(MissingArtifactError):
            load_idx(self.root / "nope", self.root / "nope2")
