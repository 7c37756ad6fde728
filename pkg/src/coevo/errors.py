"""Exception types shared across the simulator.

The CLI maps each family onto an exit code (config 1, data 2, invariant 3).
"""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


class DataError(ValueError):
    """Malformed or insufficient input data."""


class InvariantViolation(RuntimeError):
    """An internal conservation or consistency check failed."""


class PoolExhausted(LookupError):
    """No eligible incumbent remains for selection."""


class UndefinedIndicator(ArithmeticError):
    """An indicator has a zero denominator (distinct from a zero value)."""
