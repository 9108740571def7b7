"""
IDX reader for MNIST-family files (plain or gzip-compressed).

Images file (big-endian):

    [offset] [type]          [value]          [description]
    0000     32 bit integer  0x00000803(2051) magic number
    0004     32 bit integer  N                number of images
    0008     32 bit integer  rows             number of rows
    0012     32 bit integer  cols             number of columns
    0016     unsigned byte   ??               pixels, row-major

Labels file:

    0000     32 bit integer  0x00000801(2049) magic number
    0004     32 bit integer  N                number of items
    0008     unsigned byte   ??               labels
"""

import gzip
import logging
import struct
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from utils.exceptions import MissingArtifactError

from .exceptions import IdxFormatError
from .types import LabeledDataset

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
IDX_CLASS_COUNT = 10


def _read_bytes(path: Path) -> bytes:
    if not path.is_file():
        raise MissingArtifactError(path, "IDX file")
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        try:
            return gzip.decompress(raw)
        except (OSError, EOFError) as exc:
            raise IdxFormatError(path, 0, f"corrupt gzip stream: {exc}") from exc
    return raw


def _header(path: Path, blob: bytes, fields: int, magic: int) -> Tuple[int, ...]:
    size = 4 * fields
    if len(blob) < size:
        raise IdxFormatError(path, len(blob), f"truncated header, need {size} bytes")
    values = struct.unpack(f">{fields}I", blob[:size])
    if values[0] != magic:
        raise IdxFormatError(path, 0, f"bad magic 0x{values[0]:08x}, expected 0x{magic:08x}")
    return values[1:]


def read_idx_images(path) -> np.ndarray:
    """Raw uint8 pixels of shape (N, rows, cols)."""
    path = Path(path)
    blob = _read_bytes(path)
    count, rows, cols = _header(path, blob, 4, IMAGES_MAGIC)
    need = 16 + count * rows * cols
    if len(blob) < need:
        raise IdxFormatError(path, len(blob), f"truncated pixel data, header announces {count} images ({need} bytes)")
    return np.frombuffer(blob, dtype=np.uint8, count=count * rows * cols, offset=16).reshape(count, rows, cols)


def read_idx_labels(path) -> np.ndarray:
    path = Path(path)
    blob = _read_bytes(path)
    (count,) = _header(path, blob, 2, LABELS_MAGIC)
    if len(blob) < 8 + count:
        raise IdxFormatError(path, len(blob), f"truncated label data, header announces {count} labels")
    return np.frombuffer(blob, dtype=np.uint8, count=count, offset=8)


def load_idx(images_path, labels_path, limit: Optional[int] = None) -> LabeledDataset:
    """Load an image/label IDX pair scaled to [0, 1], keeping the first ``limit`` samples."""
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if len(images) != len(labels):
        raise IdxFormatError(labels_path, 4, f"{len(labels)} labels for {len(images)} images in {images_path}")
    if labels.size and labels.max() >= IDX_CLASS_COUNT:
        bad = int(np.argmax(labels >= IDX_CLASS_COUNT))
        raise IdxFormatError(labels_path, 8 + bad, f"label {labels[bad]} outside [0, {IDX_CLASS_COUNT})")

    n = len(images) if limit is None else max(0, min(int(limit), len(images)))
    stem = Path(images_path).name.split(".")[0]
    logger.info("Loaded %d of %d IDX samples from %s", n, len(images), images_path)
    return LabeledDataset(
        images=images[:n, None, :, :].astype(np.float64) / 255.0,
        labels=labels[:n].astype(np.int64),
        class_count=IDX_CLASS_COUNT,
        sample_ids=[f"{stem}-{i:06d}" for i in range(n)],
        name=stem,
        meta={"source": "idx", "images_path": str(images_path), "labels_path": str(labels_path), "limit": limit},
    )
