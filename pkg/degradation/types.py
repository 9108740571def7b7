import math
from dataclasses import asdict, dataclass
from enum import Enum

from .exceptions import DegradationSpecError


class DegradationKind(str, Enum):
    RANDOMIZE_WEIGHTS = "randomize_weights"
    INVERT_LABELS = "invert_labels"
    LIMIT_DATA = "limit_data"


DECLARED_LEVELS = {
    DegradationKind.RANDOMIZE_WEIGHTS: (0.05, 0.10, 0.30),
    DegradationKind.INVERT_LABELS: (0.05, 0.10, 0.30),
    DegradationKind.LIMIT_DATA: (0.75, 0.50, 0.25),
}
LAYER_ORDERS = ("output_first", "random")


@dataclass(frozen=True)
class DegradationSpec:
    """One degradation protocol at one level.

    Outside free mode the level must be one of the declared levels of its kind;
    in free mode any level in [0, 1] is accepted. ``noise_sigma`` scales the
    weight noise relative to each layer's parameter standard deviation.
    """

    kind: DegradationKind
    level: float
    noise_sigma: float = 0.5
    seed: int = 0
    free: bool = False
    layer_order: str = "output_first"

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", DegradationKind(self.kind))
        except ValueError:
            raise DegradationSpecError(
                f"Unknown degradation {self.kind!r}; known: {[k.value for k in DegradationKind]}"
            ) from None
        level = float(self.level)
        object.__setattr__(self, "level", level)
        if self.free:
            if not 0.0 <= level <= 1.0:
                raise DegradationSpecError(f"level must lie in [0, 1], got {level}")
        elif not any(math.isclose(level, d) for d in DECLARED_LEVELS[self.kind]):
            raise DegradationSpecError(
                f"{self.kind.value} level {level} is not one of {DECLARED_LEVELS[self.kind]}; "
                "pass free=True for other levels"
            )
        if not self.noise_sigma > 0:
            raise DegradationSpecError(f"noise_sigma must be > 0, got {self.noise_sigma}")
        if self.layer_order not in LAYER_ORDERS:
            raise DegradationSpecError(f"layer_order must be one of {LAYER_ORDERS}, got {self.layer_order!r}")

    @property
    def label(self) -> str:
        return f"{self.kind.value}@{self.level:g}"

    def to_dict(self):
        data = asdict(self)
        data["kind"] = self.kind.value
        return data
