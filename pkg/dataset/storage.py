"""
Dataset container: same framing as model files, JSON header then
little-endian float64 pixels.
"""

import logging
from pathlib import Path

import numpy as np

from utils.containers import read_container, write_container
from utils.exceptions import ContainerFormatError

from .types import LabeledDataset

logger = logging.getLogger(__name__)

DATASET_MAGIC = "XTD1"
_DTYPE = np.dtype("<f8")


def save_dataset(dataset: LabeledDataset, path) -> Path:
    header = {
        "magic": DATASET_MAGIC,
        "dtype": "f64le",
        "shape": list(dataset.images.shape),
        "class_count": dataset.class_count,
        "name": dataset.name,
        "labels": dataset.labels.tolist(),
        "sample_ids": dataset.sample_ids,
        "meta": dataset.meta,
    }
    if dataset.corruption_mask is not None:
        header["corruption_mask"] = dataset.corruption_mask.astype(int).tolist()
        header["original_labels"] = dataset.original_labels.tolist()
    path = write_container(path, header, np.ascontiguousarray(dataset.images, dtype=_DTYPE).tobytes())
    logger.info("Saved dataset %s (%d samples) to %s", dataset.name, len(dataset), path)
    return path


def load_dataset(path) -> LabeledDataset:
    header, payload = read_container(path)
    if header.get("magic") != DATASET_MAGIC:
        raise ContainerFormatError(f"{path}: bad dataset magic {header.get('magic')!r} at offset 8")
    shape = tuple(int(d) for d in header["shape"])
    expected = int(np.prod(shape)) * _DTYPE.itemsize
    if len(payload) != expected:
        raise ContainerFormatError(f"{path}: pixel payload is {len(payload)} bytes, expected {expected}")
    images = np.frombuffer(payload, dtype=_DTYPE).reshape(shape).astype(np.float64)
    mask = header.get("corruption_mask")
    return LabeledDataset(
        images=images,
        labels=np.asarray(header["labels"], dtype=np.int64),
        class_count=header["class_count"],
        sample_ids=header["sample_ids"],
        name=header.get("name", "dataset"),
        corruption_mask=None if mask is None else np.asarray(mask, dtype=bool),
        original_labels=None if mask is None else np.asarray(header["original_labels"], dtype=np.int64),
        meta=dict(header.get("meta") or {}),
    )
