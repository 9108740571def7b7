from dataclasses import dataclass
from typing import Union

from .exceptions import UnknownDistanceError

KIND_NAMES = ("spearman_abs", "l1", "l2", "ssim", "dice")


@dataclass(frozen=True)
class DistanceKind:
    """A distance name plus the dice binarization quantile (top 10 % by default)."""

    name: str = "spearman_abs"
    dice_threshold: float = 0.9

    def __post_init__(self):
        if self.name not in KIND_NAMES:
            raise UnknownDistanceError(f"Unknown distance kind {self.name!r}; known: {list(KIND_NAMES)}")
        if not 0 < self.dice_threshold < 1:
            raise UnknownDistanceError(f"dice_threshold must lie in (0, 1), got {self.dice_threshold}")

    @classmethod
    def parse(cls, value: Union[str, "DistanceKind"]) -> "DistanceKind":
        return value if isinstance(value, DistanceKind) else cls(str(value).lower())

    def __str__(self):
        return self.name


ALL_KINDS = tuple(DistanceKind(name) for name in KIND_NAMES)
