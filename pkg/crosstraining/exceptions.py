from utils.exceptions import ConfigError, DataError, NumericError


class PartitionError(DataError):
    """Blocks cannot be formed, or do not match the dataset they index."""


class EmptyEnsembleError(ConfigError):
    pass


class AccuracySpreadError(NumericError):
    def __init__(self, accuracies, tolerance: float):
        self.accuracies = list(accuracies)
        self.spread = max(self.accuracies) - min(self.accuracies)
        super().__init__(
            f"fold accuracies {[round(a, 4) for a in self.accuracies]} spread {self.spread:.4f} "
            f"exceeds the tolerance {tolerance}; train longer or raise accuracy_tolerance"
        )
