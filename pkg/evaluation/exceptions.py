from utils.exceptions import ConfigError, NumericError


class UndefinedMetricError(NumericError):
    """A metric was asked for on inputs where it has no value (e.g. an empty multiset)."""


class MetricConfigError(ConfigError):
    pass
