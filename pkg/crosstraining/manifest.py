"""
Ensemble manifest: ``manifest.json`` next to one model file per fold.

    {
      "k": 5,
      "blocks": [[...], ...],
      "accuracies": [...],
      "seeds": {"partition": 0, "init": [...], "shuffle": [...]},
      "model_files": ["fold-0.xtm", ...],
      ...
    }
"""

import json
import logging
from pathlib import Path

from engine.storage import load_model, save_model
from utils.exceptions import ContainerFormatError, MissingArtifactError

from .types import FoldEnsemble

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def ensemble_manifest(ensemble: FoldEnsemble, model_files):
    return {
        "k": ensemble.k,
        "blocks": [[int(i) for i in b] for b in ensemble.blocks],
        "accuracies": ensemble.accuracies,
        "accuracy_spread": ensemble.spread,
        "accuracy_tolerance": ensemble.accuracy_tolerance,
        "accuracy_source": ensemble.accuracy_source,
        "seeds": ensemble.seeds,
        "architecture": ensemble.architecture,
        "train_config": ensemble.train_config,
        "degradation": ensemble.degradation,
        "model_files": list(model_files),
    }


def save_ensemble(ensemble: FoldEnsemble, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for i, model in enumerate(ensemble.models):
        name = f"fold-{i}.xtm"
        save_model(model, directory / name)
        files.append(name)
    path = directory / MANIFEST_NAME
    path.write_text(json.dumps(ensemble_manifest(ensemble, files), indent=2, sort_keys=True))
    logger.info("Saved %d-fold ensemble to %s", ensemble.k, directory)
    return path


def load_ensemble(directory) -> FoldEnsemble:
    directory = Path(directory)
    path = directory / MANIFEST_NAME
    if not path.is_file():
        raise MissingArtifactError(path, "ensemble manifest")
    try:
        data = json.loads(path.read_text())
        files = data["model_files"]
        blocks = data["blocks"]
        accuracies = data["accuracies"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ContainerFormatError(f"{path}: unreadable ensemble manifest: {exc}") from exc
    models = [load_model(directory / name) for name in files]
    return FoldEnsemble(
        blocks=blocks,
        models=models,
        accuracies=accuracies,
        seeds=data.get("seeds") or {},
        accuracy_tolerance=data.get("accuracy_tolerance", 0.03),
        accuracy_source=data.get("accuracy_source", "test"),
        architecture=data.get("architecture"),
        train_config=data.get("train_config") or {},
        degradation=data.get("degradation"),
    )
