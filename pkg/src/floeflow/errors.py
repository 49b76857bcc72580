"""Exception types shared across the package."""


class FloeflowError(Exception):
    """Base class for all floeflow errors."""


class ConfigError(FloeflowError):
    """Invalid, missing, or contradictory scenario configuration."""


class PackingError(FloeflowError):
    """Requested floe packing cannot fit in the domain."""


class NumericalBlowupError(FloeflowError):
    """Non-finite state detected during time stepping."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class SchemaError(FloeflowError):
    """Output file does not match the expected versioned schema."""
