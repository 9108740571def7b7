import copy
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import yaml
from django.conf import settings

from attribution.types import AttributionConfig
from degradation.services import default_grid
from degradation.types import DegradationSpec
from engine.training import TrainConfig
from evaluation.types import FidelityConfig, StabilityConfig
from utils.exceptions import MissingArtifactError

from .exceptions import RunConfigError
from .serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

RUN_CONFIG_NAME = "run_config.yaml"
# where the results land and how many workers compute them; neither changes a number
LOCATION_KEYS = ("output_dir", "n_jobs")


@dataclass(frozen=True)
class RunConfig:
    """A validated run configuration (plain nested dicts, JSON-compatible)."""

    data: Dict[str, Any]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any], source: str = "<config>") -> "RunConfig":
        serializer = RunConfigSerializer(data=mapping)
        if not serializer.is_valid():
            raise RunConfigError(serializer.errors, source)
        return cls(json.loads(json.dumps(serializer.validated_data)))

    def __getitem__(self, key):
        return self.data[key]

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.data)

    def protocol(self) -> Dict[str, Any]:
        """Everything that determines the numbers of a run."""
        return {k: v for k, v in self.to_dict().items() if k not in LOCATION_KEYS}

    def with_overrides(self, **overrides) -> "RunConfig":
        changes = {k: v for k, v in overrides.items() if v is not None}
        if not changes:
            return self
        return RunConfig.from_mapping({**self.to_dict(), **changes}, source="<overrides>")

    @property
    def output_dir(self) -> Path:
        return Path(self.data.get("output_dir") or settings.XAI_OUTPUT_DIR)

    @property
    def n_jobs(self) -> int:
        value = self.data.get("n_jobs")
        return settings.XAI_N_JOBS if value is None else value

    @property
    def seeds(self) -> Dict[str, int]:
        return dict(self.data["seeds"])

    def train_config(self) -> TrainConfig:
        return TrainConfig(seed=self.seeds["partition"], **self.data["training"])

    def attribution_config(self) -> AttributionConfig:
        return AttributionConfig(rng_seed=self.seeds["attribution"], **self.data["attribution"])

    def fidelity_config(self) -> FidelityConfig:
        return FidelityConfig(seed=self.seeds["metrics"], **self.data["fidelity"])

    def stability_config(self) -> StabilityConfig:
        return StabilityConfig(seed=self.seeds["metrics"], **self.data["stability"])

    def degradation_spec(self) -> Optional[DegradationSpec]:
        spec = self.data.get("degradation")
        return None if spec is None else DegradationSpec(seed=self.seeds["degradation"], **spec)

    def degradation_grid(self) -> List[DegradationSpec]:
        grid = self.data.get("degradation_grid")
        if grid is None:
            return default_grid(seed=self.seeds["degradation"])
        return [DegradationSpec(seed=self.seeds["degradation"], **spec) for spec in grid]


def load_run_config(path=None, **overrides) -> RunConfig:
    """Read a YAML (or JSON) run config; ``None`` means all defaults."""
    mapping: Dict[str, Any] = {}
    source = "<defaults>"
    if path is not None:
        path = Path(path)
        source = str(path)
        if not path.is_file():
            raise MissingArtifactError(path, "run config")
        try:
            mapping = yaml.safe_load(path.read_text()) or {}
        except yaml.YAMLError as exc:
            raise RunConfigError({"config": [f"not valid YAML: {exc}"]}, source) from exc
        if not isinstance(mapping, dict):
            raise RunConfigError({"config": ["top level must be a mapping"]}, source)
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    config = RunConfig.from_mapping(mapping, source)
    logger.debug("Loaded run config from %s", source)
    return config


def save_run_config(config: RunConfig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(config.to_dict(), sort_keys=True, default_flow_style=False))
    return path
