from utils.exceptions import ConfigError, DataError


class DegradationSpecError(ConfigError):
    pass


class DegradationError(DataError):
    """A degradation produced an unusable dataset, e.g. a class with no samples left."""
