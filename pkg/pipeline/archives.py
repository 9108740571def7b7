"""
Explanation archives: the maps one model produced for a list of samples.

Framing is the shared container (``utils.containers``) with header

    {"magic": "XTA1", "dtype": "f32le", "map_shape": [H, W], "method": "SM",
     "model_id": "fold-0", "sample_ids": [...], "predictions": [...],
     "created": "...", "seed": 0}

and a payload of len(sample_ids) * H * W little-endian float32 values in
sample order. ``predictions`` holds the class each map explains, so the
pairing step can run from archives alone.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from django.utils import timezone

from crosstraining.types import ExplanationBank
from utils.containers import read_container, write_container
from utils.exceptions import ContainerFormatError, MissingArtifactError

from .exceptions import ArchiveFormatError

logger = logging.getLogger(__name__)

ARCHIVE_MAGIC = "XTA1"
ARCHIVE_DTYPE = "f32le"
ARCHIVE_SUFFIX = ".xta"
_DTYPE = np.dtype("<f4")


@dataclass
class ExplanationArchive:
    maps: np.ndarray
    method: str
    model_id: str
    sample_ids: List[str]
    seed: int = 0
    created: str = ""
    predictions: Optional[np.ndarray] = None
    map_shape: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=_DTYPE)
        if self.map_shape is not None and maps.size == 0:
            maps = maps.reshape((0,) + tuple(self.map_shape))
        if maps.ndim != 3:
            raise ArchiveFormatError(f"archive maps must be N x H x W, got shape {maps.shape}")
        self.maps = maps
        self.map_shape = tuple(int(d) for d in maps.shape[1:])
        self.sample_ids = [str(s) for s in self.sample_ids]
        if len(self.sample_ids) != len(maps):
            raise ArchiveFormatError(f"{len(self.sample_ids)} sample ids for {len(maps)} maps")
        if self.predictions is not None:
            self.predictions = np.asarray(self.predictions, dtype=np.int64).reshape(-1)
            if len(self.predictions) != len(maps):
                raise ArchiveFormatError(f"{len(self.predictions)} predictions for {len(maps)} maps")

    def __len__(self):
        return len(self.sample_ids)

    def header(self):
        return {
            "magic": ARCHIVE_MAGIC,
            "dtype": ARCHIVE_DTYPE,
            "map_shape": list(self.map_shape),
            "method": self.method,
            "model_id": self.model_id,
            "sample_ids": list(self.sample_ids),
            "predictions": None if self.predictions is None else self.predictions.tolist(),
            "created": self.created,
            "seed": int(self.seed),
        }

    def equals(self, other: "ExplanationArchive") -> bool:
        return self.header() == other.header() and self.maps.tobytes() == other.maps.tobytes()


def write_archive(archive: ExplanationArchive, path) -> Path:
    path = write_container(path, archive.header(), np.ascontiguousarray(archive.maps, dtype=_DTYPE).tobytes())
    logger.debug("Wrote %d %s maps of %s to %s", len(archive), archive.method, archive.model_id, path)
    return path


def read_archive(path) -> ExplanationArchive:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifactError(path, "explanation archive")
    try:
        header, payload = read_container(path)
    except ContainerFormatError as exc:
        raise ArchiveFormatError(str(exc)) from exc

    if header.get("magic") != ARCHIVE_MAGIC:
        raise ArchiveFormatError(f"{path}: bad archive magic {header.get('magic')!r}, expected {ARCHIVE_MAGIC!r}")
    if header.get("dtype") != ARCHIVE_DTYPE:
        raise ArchiveFormatError(f"{path}: unsupported dtype {header.get('dtype')!r}, only {ARCHIVE_DTYPE!r} is read")
    shape = header.get("map_shape")
    sample_ids = header.get("sample_ids")
    if (not isinstance(shape, list) or len(shape) != 2 or not all(isinstance(d, int) and d > 0 for d in shape)
            or not isinstance(sample_ids, list)):
        raise ArchiveFormatError(f"{path}: header needs a 2-d map_shape and a sample_ids list")
    expected = len(sample_ids) * shape[0] * shape[1] * _DTYPE.itemsize
    if len(payload) != expected:
        raise ArchiveFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} for {len(sample_ids)} maps of {shape}"
        )
    maps = np.frombuffer(payload, dtype=_DTYPE).reshape((len(sample_ids), shape[0], shape[1]))
    return ExplanationArchive(
        maps=maps.copy(),
        method=header.get("method", ""),
        model_id=header.get("model_id", ""),
        sample_ids=sample_ids,
        seed=header.get("seed", 0),
        created=header.get("created", ""),
        predictions=header.get("predictions"),
        map_shape=tuple(shape),
    )


def archives_from_bank(bank: ExplanationBank, seed: int = 0, created: Optional[str] = None) -> List[ExplanationArchive]:
    created = created if created is not None else timezone.now().isoformat()
    return [
        ExplanationArchive(maps=bank.maps[i], method=bank.method, model_id=bank.model_ids[i],
                           sample_ids=list(bank.sample_ids), seed=seed, created=created,
                           predictions=bank.predictions[i], map_shape=tuple(bank.maps.shape[2:]))
        for i in range(bank.k)
    ]


def bank_from_archives(archives: Sequence[ExplanationArchive]) -> ExplanationBank:
    """Stack per-model archives (fold order) back into a bank for the pairing step."""
    if not archives:
        raise ArchiveFormatError("no explanation archives to stack")
    first = archives[0]
    for archive in archives:
        if archive.method != first.method or archive.map_shape != first.map_shape:
            raise ArchiveFormatError(
                f"archive of {archive.model_id} holds {archive.method} maps of {archive.map_shape}, "
                f"expected {first.method} maps of {first.map_shape}"
            )
        if archive.sample_ids != first.sample_ids:
            raise ArchiveFormatError(f"archive of {archive.model_id} explains different samples than {first.model_id}")
        if archive.predictions is None:
            raise ArchiveFormatError(f"archive of {archive.model_id} carries no predictions")
    return ExplanationBank(
        method=first.method,
        maps=np.stack([a.maps.astype(np.float64) for a in archives]),
        predictions=np.stack([a.predictions for a in archives]),
        sample_ids=list(first.sample_ids),
        model_ids=[a.model_id for a in archives],
    )


def archive_path(directory, index: int) -> Path:
    return Path(directory) / f"fold-{index}{ARCHIVE_SUFFIX}"


def save_bank(bank: ExplanationBank, directory, seed: int = 0, created: Optional[str] = None) -> List[Path]:
    paths = [write_archive(archive, archive_path(directory, i))
             for i, archive in enumerate(archives_from_bank(bank, seed, created))]
    logger.info("Saved %s explanations of %d models to %s", bank.method, bank.k, directory)
    return paths


def load_bank(directory, k: int) -> ExplanationBank:
    return bank_from_archives([read_archive(archive_path(directory, i)) for i in range(k)])
