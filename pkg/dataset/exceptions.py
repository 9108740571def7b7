from utils.exceptions import ConfigError, DataError


class DataFormatError(DataError):
    """Dataset arrays are inconsistent or outside the expected value range."""


class IdxFormatError(DataFormatError):
    """An IDX file has a bad magic number, is truncated or disagrees with its partner file."""

    def __init__(self, path, offset: int, message: str):
        self.path = str(path)
        self.offset = offset
        super().__init__(f"{self.path}: {message} (offset {offset})")


class DatasetSpecError(ConfigError):
    """Invalid generator arguments."""
