from utils.exceptions import ConfigError, DataError, NumericError


class ShapeMismatchError(DataError):
    """An array reached a layer with a shape the layer cannot consume."""

    def __init__(self, layer_index: int, layer_kind: str, expected, got):
        self.layer_index = layer_index
        super().__init__(
            f"layer {layer_index} ({layer_kind}) expects input shape {tuple(expected)}, got {tuple(got)}"
        )


class LayerTypeError(ConfigError):
    """An operation was asked for a layer of the wrong type."""


class ClassIndexError(ConfigError, IndexError):
    pass


class EmptyDatasetError(DataError):
    pass


class TrainingDivergedError(NumericError):
    def __init__(self, epoch: int, batch: int, loss: float, learning_rate: float):
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
        super().__init__(
            f"non-finite loss {loss!r} at epoch {epoch}, batch {batch} "
            f"(learning_rate={learning_rate}); lower the learning rate or check the inputs"
        )
