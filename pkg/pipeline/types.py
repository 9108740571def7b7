from dataclasses import dataclass
from pathlib import Path

from .config import RUN_CONFIG_NAME

SUBCOMMANDS = ("gen-data", "train", "explain", "sanity", "metrics", "degrade-sweep", "report")


@dataclass(frozen=True)
class RunPaths:
    """File layout of one run directory."""

    root: Path

    @property
    def run_config(self) -> Path:
        return self.root / RUN_CONFIG_NAME

    @property
    def train_data(self) -> Path:
        return self.root / "data" / "train.xtd"

    @property
    def test_data(self) -> Path:
        return self.root / "data" / "test.xtd"

    @property
    def ensemble(self) -> Path:
        return self.root / "ensemble"

    def explanations(self, method: str) -> Path:
        return self.root / "explanations" / method

    @property
    def sanity(self) -> Path:
        return self.root / "sanity"

    @property
    def reports(self) -> Path:
        return self.root / "reports"
