"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, grid, initial condition or run configuration."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class InvertibilityError(ConfigurationError):
    """The mass is not strictly positive, so the operator D has no inverse."""


class GridMismatchError(ValueError):
    """Two fields (or a field and a symbol) live on different grids."""


class NonFiniteFieldError(ValueError):
    """A field contains NaN or Inf values."""


class NumericalBlowupError(FloatingPointError):
    """A time integration produced non-finite values."""


class SnapshotError(IOError):
    """A snapshot file is malformed or truncated."""
