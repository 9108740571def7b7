from engine.exceptions import LayerTypeError
from utils.exceptions import ConfigError, DataError


class UnknownMethodError(ConfigError):
    pass


class AttributionConfigError(ConfigError):
    pass


class NoConvLayerError(LayerTypeError):
    """Grad-CAM needs at least one conv layer."""


class ExplanationShapeError(DataError):
    pass
