"""Base exception hierarchy shared by every app.

Each exception carries the process exit code the CLI reports for it:
2 for usage/config problems, 3 for data problems, 4 for numeric failures.
"""

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class CrossCheckError(Exception):
    exit_code = 1


class ConfigError(CrossCheckError, ValueError):
    exit_code = EXIT_USAGE


class DataError(CrossCheckError, ValueError):
    exit_code = EXIT_DATA


class NumericError(CrossCheckError, ArithmeticError):
    exit_code = EXIT_NUMERIC


class ContainerFormatError(DataError):
    """A binary container is truncated or its header cannot be parsed."""


class MissingArtifactError(DataError, FileNotFoundError):
    """A file the pipeline needs (model, archive, manifest) does not exist."""

    def __init__(self, path, what="file"):
        self.path = str(path)
        super().__init__(f"Missing {what}: {self.path}")
