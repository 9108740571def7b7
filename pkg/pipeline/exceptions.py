from utils.exceptions import ConfigError, ContainerFormatError


class RunConfigError(ConfigError):
    """The run configuration file is unreadable or violates the schema."""

    def __init__(self, errors, source="<config>"):
        self.errors = errors
        super().__init__(f"Invalid run config {source}: {_describe(errors)}")


class ArchiveFormatError(ContainerFormatError):
    """An explanation archive has a bad magic, dtype or payload length."""


def _describe(errors, prefix=""):
    if isinstance(errors, dict):
        return "; ".join(_describe(v, f"{prefix}{k}.") for k, v in errors.items())
    if isinstance(errors, list) and errors and all(isinstance(e, str) for e in errors):
        return f"{prefix.rstrip('.') or 'config'}: {' '.join(errors)}"
    if isinstance(errors, list):
        return "; ".join(_describe(e, f"{prefix}{i}.") for i, e in enumerate(errors) if e)
    return f"{prefix.rstrip('.') or 'config'}: {errors}"
