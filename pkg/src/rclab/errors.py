"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameters, shapes or configuration values."""


class NumericError(ArithmeticError):
    """A numerical computation cannot proceed (non-finite data, degenerate targets)."""


class DegenerateTargetError(NumericError):
    """Target values have zero spread, so an RMS-based accuracy is undefined."""
