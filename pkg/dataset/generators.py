"""
Procedural shape dataset.

Every image holds one class-defining glyph drawn over textured background
noise. The glyph box is placed uniformly at random inside the image, so a
classifier has to find the glyph instead of reading fixed pixels.
"""

import logging
from typing import Callable, Dict

import numpy as np

from .exceptions import DatasetSpecError
from .types import LabeledDataset

logger = logging.getLogger(__name__)

MIN_CLASSES, MAX_CLASSES = 2, 8
MIN_SIZE = 8


def _bar_h(g):
    m = np.zeros((g, g), dtype=bool)
    m[g // 2 - 1:g // 2 + 1, :] = True
    return m


def _bar_v(g):
    return _bar_h(g).T


def _cross(g):
    return _bar_h(g) | _bar_v(g)


def _blob(g):
    r = np.arange(g) - (g - 1) / 2
    return (r[:, None] ** 2 + r[None, :] ** 2) <= (g / 2.5) ** 2


def _corner(g):
    m = np.zeros((g, g), dtype=bool)
    m[:2, :] = True
    m[:, :2] = True
    return m


def _diagonal(g):
    i = np.arange(g)
    return np.abs(i[:, None] - i[None, :]) <= 1


def _box(g):
    m = np.zeros((g, g), dtype=bool)
    m[[0, -1], :] = True
    m[:, [0, -1]] = True
    return m


def _saltire(g):
    return _diagonal(g) | _diagonal(g)[:, ::-1]


GLYPHS: Dict[str, Callable[[int], np.ndarray]] = {
    "bar_h": _bar_h,
    "bar_v": _bar_v,
    "cross": _cross,
    "blob": _blob,
    "corner": _corner,
    "diagonal": _diagonal,
    "box": _box,
    "saltire": _saltire,
}
GLYPH_ORDER = list(GLYPHS)


def gen_shapes(n: int, size: int, classes: int, seed: int, noise_level: float = 0.35) -> LabeledDataset:
    """Generate ``n`` single-channel ``size`` x ``size`` images over ``classes`` glyph classes."""
    if not MIN_CLASSES <= classes <= MAX_CLASSES:
        raise DatasetSpecError(f"classes must lie in [{MIN_CLASSES}, {MAX_CLASSES}], got {classes}")
    if size < MIN_SIZE:
        raise DatasetSpecError(f"size must be >= {MIN_SIZE}, got {size}")
    if n < 0:
        raise DatasetSpecError(f"n must be >= 0, got {n}")
    if not 0 <= noise_level < 0.6:
        raise DatasetSpecError(f"noise_level must lie in [0, 0.6), got {noise_level}")

    rng = np.random.default_rng(seed)
    labels = rng.permutation(np.arange(n) % classes)
    glyph_size = size // 2
    # top-left corners keep the whole glyph inside the image
    positions = size - glyph_size + 1
    masks = [GLYPHS[GLYPH_ORDER[c]](glyph_size) for c in range(classes)]

    images = np.empty((n, 1, size, size))
    for i, label in enumerate(labels):
        img = rng.uniform(0.0, noise_level, size=(size, size))
        top, left = rng.integers(0, positions, size=2)
        region = img[top:top + glyph_size, left:left + glyph_size]
        ink = rng.uniform(0.7, 1.0) - rng.uniform(0.0, 0.1, size=region.shape)
        region[masks[label]] = ink[masks[label]]
        images[i, 0] = np.clip(img, 0.0, 1.0)

    logger.info("Generated gen_shapes n=%d size=%d classes=%d seed=%d", n, size, classes, seed)
    return LabeledDataset(
        images=images,
        labels=labels,
        class_count=classes,
        sample_ids=[f"shapes-{seed}-{i:06d}" for i in range(n)],
        name="gen_shapes",
        meta={"generator": "gen_shapes", "n": n, "size": size, "classes": classes, "seed": seed,
              "noise_level": noise_level},
    )
