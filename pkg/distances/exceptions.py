from utils.exceptions import ConfigError, DataError, NumericError


class DegenerateInputError(NumericError):
    """A constant map (zero rank or intensity variance) has no defined correlation."""

    def __init__(self, message: str, sample_id: str = ""):
        self.sample_id = sample_id
        super().__init__(f"{message} (sample {sample_id})" if sample_id else message)


class DistanceShapeError(DataError):
    pass


class UnknownDistanceError(ConfigError):
    pass
